def first():
    pass


def second():
    pass


a = lambda: first()
b = lambda: second()
b()
a()
