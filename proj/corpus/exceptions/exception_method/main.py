class AppError(Exception):
    def describe(self):
        pass


try:
    raise AppError()
except AppError as e:
    e.describe()
