def fallback():
    pass


def custom():
    pass


def run(callback=fallback):
    callback()


run()
run(custom)
