def func():
    pass


def run(handlers):
    handlers["cb"]()


run({"cb": func})
