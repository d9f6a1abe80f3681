def func():
    pass


class Holder:
    pass


Holder.action = func
Holder.action()
