class Outer:
    class Inner:
        def method(self):
            pass


Outer.Inner().method()
