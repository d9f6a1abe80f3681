def func():
    pass


class A:
    def __init__(self):
        self.callback = func


a = A()
a.callback()
