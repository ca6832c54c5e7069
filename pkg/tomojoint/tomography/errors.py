from tomojoint.errors import TomojointError


class TomographyError(TomojointError):
    pass
