import second


def run():
    second.helper()
