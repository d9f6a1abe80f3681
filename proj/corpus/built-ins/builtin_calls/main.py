def func():
    return [3, 1, 2]


values = sorted(func())
print(len(values))
