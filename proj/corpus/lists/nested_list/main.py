def func():
    pass


fns = [[func]]
fns[0][0]()
