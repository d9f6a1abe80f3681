def target():
    pass


d = {"a": lambda: target()}
d["a"]()
