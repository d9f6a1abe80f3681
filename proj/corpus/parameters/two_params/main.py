def first():
    pass


def second():
    pass


def apply(a, b):
    a()
    b()


apply(first, second)
