def first():
    pass


def second():
    pass


action = first


def switch():
    global action
    action = second


switch()
action()
