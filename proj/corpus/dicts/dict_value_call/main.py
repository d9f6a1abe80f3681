def func():
    pass


d = {"a": func}
d["a"]()
