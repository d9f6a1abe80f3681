def target():
    pass


def run(callback):
    callback()


run(target)
