def factory():
    class Local:
        def go(self):
            pass

    return Local


factory()().go()
