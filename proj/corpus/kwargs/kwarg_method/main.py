def target():
    pass


class Runner:
    def run(self, handler=None):
        handler()


Runner().run(handler=target)
