def len(obj):
    return 0


len([1, 2])
