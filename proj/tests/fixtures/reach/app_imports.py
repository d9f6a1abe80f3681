import yamlish


def save(data):
    return yamlish.dump(data)


save({"key": "value"})
