def first():
    pass


def second():
    pass


fns = [first, second]
results = [fn() for fn in fns]
