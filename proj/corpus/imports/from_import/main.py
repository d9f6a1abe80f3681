from util import func

func()
