class A:
    def method(self):
        pass


def get():
    return A().method


get()()
