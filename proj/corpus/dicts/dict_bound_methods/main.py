class Handler:
    def __init__(self):
        self.table = {"x": self.on_x}

    def on_x(self):
        pass

    def dispatch(self):
        self.table["x"]()


Handler().dispatch()
