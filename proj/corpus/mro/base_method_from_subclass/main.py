class A:
    def helper(self):
        pass


class B(A):
    def run(self):
        self.helper()


B().run()
