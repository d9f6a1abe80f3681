class A:
    def method(self):
        pass


class B(A):
    pass


class C(A):
    def method(self):
        pass


class D(B, C):
    pass


D().method()
