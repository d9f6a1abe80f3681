class Service:
    def fail(self):
        raise RuntimeError()

    def log(self):
        pass

    def run(self):
        try:
            self.fail()
        except RuntimeError:
            self.log()


Service().run()
