def first():
    pass


def second():
    pass


d = {"a": first, "b": second}
d["b"]()
