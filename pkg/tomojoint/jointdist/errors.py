from tomojoint.errors import NumericFailure, TomojointError


class PriorError(TomojointError):
    pass


class PriorUnderflow(PriorError, NumericFailure):
    """The prior fell below the floor somewhere on the grid"""
    pass
