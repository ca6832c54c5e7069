from tomojoint.errors import TomojointError


class StateError(TomojointError):
    pass
