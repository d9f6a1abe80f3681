import util

util.func()
