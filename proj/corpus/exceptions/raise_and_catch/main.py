class MyError(Exception):
    def __init__(self):
        super().__init__()


def handler(err):
    pass


def thrower():
    raise MyError()


try:
    thrower()
except MyError as e:
    handler(e)
