def target():
    pass


def func():
    return target


func()()
