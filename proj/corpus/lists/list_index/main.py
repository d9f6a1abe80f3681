def first():
    pass


def second():
    pass


fns = [first, second]
fns[1]()
