from tomojoint.errors import TomojointError


class SymbolError(TomojointError):
    pass
