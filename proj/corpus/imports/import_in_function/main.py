def run():
    import util

    util.func()


run()
