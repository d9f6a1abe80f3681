def dec(f):
    def wrapper(*args):
        return f(*args)

    return wrapper


@dec
def func(x):
    pass


func(1)
