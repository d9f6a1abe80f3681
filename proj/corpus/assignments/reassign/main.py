def first():
    pass


def second():
    pass


x = first
x()
x = second
x()
