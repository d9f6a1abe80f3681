class A:
    def method(self):
        pass


m = A().method
m()
