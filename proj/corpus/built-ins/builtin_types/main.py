def func():
    pass


items = list()
items.append(1)
mapping = dict(a=1)
mapping.update(b=2)
func()
