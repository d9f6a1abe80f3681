class A:
    def func(self):
        pass


class B(A):
    def func(self):
        pass


class C(B, A):
    pass


C().func()
