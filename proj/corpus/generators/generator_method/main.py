class A:
    def steps(self):
        yield self.step

    def step(self):
        pass


for s in A().steps():
    s()
