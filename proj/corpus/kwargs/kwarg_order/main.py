def first():
    pass


def second():
    pass


def run(a, b):
    b()


run(b=second, a=first)
