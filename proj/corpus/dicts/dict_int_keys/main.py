def zero():
    pass


def one():
    pass


d = {0: zero, 1: one}
d[1]()
