def produce():
    return 1


def gen():
    yield produce()


for x in gen():
    pass
