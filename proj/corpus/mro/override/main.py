class A:
    def method(self):
        pass


class B(A):
    def method(self):
        pass


B().method()
