def logged(f):
    def wrapper(*args):
        return f(*args)

    return wrapper


class A:
    @logged
    def method(self):
        pass


A().method()
