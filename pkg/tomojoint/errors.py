class TomojointError(Exception):
    """
    Base class for every error raised by tomojoint
    """
    def __init__(self, message):
        super(TomojointError, self).__init__(message)
        self.message = str(message)


class NumericFailure(TomojointError):
    """
    The numbers went bad: underflow, NaN or a run-away integration
    """
    pass
