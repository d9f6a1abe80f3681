class A:
    @staticmethod
    def build():
        pass

    @classmethod
    def create(cls):
        cls.build()


A.create()
