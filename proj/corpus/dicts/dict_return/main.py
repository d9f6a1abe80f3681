def func():
    pass


def get():
    return {"f": func}


get()["f"]()
