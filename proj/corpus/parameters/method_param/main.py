def helper(obj):
    pass


class Runner:
    def call(self, fn):
        fn(self)


Runner().call(helper)
