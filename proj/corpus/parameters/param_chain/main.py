def target():
    pass


def run(callback):
    callback()


def outer(fn):
    run(fn)


outer(target)
