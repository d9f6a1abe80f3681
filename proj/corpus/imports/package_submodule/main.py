from pkg.mod import func

func()
