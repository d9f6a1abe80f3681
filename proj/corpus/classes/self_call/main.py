class A:
    def run(self):
        self.helper()

    def helper(self):
        pass


A().run()
