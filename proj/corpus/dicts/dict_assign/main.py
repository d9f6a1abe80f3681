def func():
    pass


d = {}
d["key"] = func
d["key"]()
