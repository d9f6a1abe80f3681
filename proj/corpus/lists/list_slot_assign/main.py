def old():
    pass


def new():
    pass


fns = [old]
fns[0] = new
fns[0]()
