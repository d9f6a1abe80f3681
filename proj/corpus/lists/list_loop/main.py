def first():
    pass


def second():
    pass


for fn in [first, second]:
    fn()
