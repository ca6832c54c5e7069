from tomojoint.errors import NumericFailure, TomojointError


class DynamicsError(TomojointError):
    pass


class BlowUp(DynamicsError, NumericFailure):
    """
    Time stepping produced non-finite or run-away values
    """
    def __init__(self, message, step=None, time=None):
        super(BlowUp, self).__init__(message)
        self.step = step
        self.time = time
