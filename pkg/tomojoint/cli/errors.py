from tomojoint.errors import TomojointError


class UsageError(TomojointError):
    """Bad command line or configuration; exit code 2"""
    pass
