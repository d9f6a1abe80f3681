def gen():
    yield 1


values = [x for x in gen()]
