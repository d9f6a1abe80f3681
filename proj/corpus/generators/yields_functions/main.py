def first():
    pass


def second():
    pass


def gen():
    yield first
    yield second


for fn in gen():
    fn()
