def risky():
    raise ValueError()


def recover():
    pass


def cleanup():
    pass


try:
    risky()
except ValueError:
    recover()
finally:
    cleanup()
