import first

first.run()
