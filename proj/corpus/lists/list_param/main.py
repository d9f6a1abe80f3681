def func():
    pass


def run(fns):
    fns[0]()


run([func])
