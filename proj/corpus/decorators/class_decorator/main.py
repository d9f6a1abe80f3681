def register(cls):
    return cls


@register
class A:
    def method(self):
        pass


A().method()
