class B:
    def run(self):
        pass


class A:
    def make(self):
        return B()


A().make().run()
