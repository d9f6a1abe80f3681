def target():
    pass


def get():
    return target


x = get()
x()
