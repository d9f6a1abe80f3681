def func():
    pass


fns = []
fns.append(func)
fns[0]()
