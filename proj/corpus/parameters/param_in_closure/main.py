def target():
    pass


def outer(fn):
    def inner():
        fn()

    inner()


outer(target)
