def target():
    pass


def run(callback=None):
    callback()


run(callback=target)
