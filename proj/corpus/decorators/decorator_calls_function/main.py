def record(f):
    pass


def dec(f):
    record(f)
    return f


@dec
def func():
    pass


func()
