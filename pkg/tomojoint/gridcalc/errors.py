from tomojoint.errors import TomojointError


class GridError(TomojointError):
    pass
