class A:
    def method(self):
        pass


class B(A):
    def method(self):
        super().method()


class C(A):
    def method(self):
        super().method()


class D(B, C):
    pass


D().method()
