def target():
    pass


def run(**kwargs):
    kwargs["callback"]()


run(callback=target)
