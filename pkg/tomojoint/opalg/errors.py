from tomojoint.errors import TomojointError


class OperatorError(TomojointError):
    pass
