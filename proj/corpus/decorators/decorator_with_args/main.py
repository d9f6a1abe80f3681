def tag(name):
    def deco(f):
        return f

    return deco


@tag("x")
def func():
    pass


func()
