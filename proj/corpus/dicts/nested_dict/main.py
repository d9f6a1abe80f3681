def func():
    pass


d = {"inner": {"f": func}}
d["inner"]["f"]()
