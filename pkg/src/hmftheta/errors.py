"""Exception hierarchy shared by all modules."""


class HMFThetaError(Exception):
    """Base class for every error raised by the package."""


class DivisionByZero(HMFThetaError, ZeroDivisionError):
    pass


class ContextMismatch(HMFThetaError, ValueError):
    """Two field elements from different coefficient fields were combined."""


class InvalidConfig(HMFThetaError, ValueError):
    """A field, shape or model configuration failed validation."""


class NonDivisibleWeight(HMFThetaError, ValueError):
    """A weight is not in the image of the partial Frobenius weight map."""

    def __init__(self, message, weight=None, slot=None):
        super().__init__(message)
        self.weight = weight
        self.slot = slot


class ModelInconsistent(HMFThetaError, ValueError):
    pass


class WeightMismatch(HMFThetaError, ValueError):
    pass


class ModelMismatch(HMFThetaError, ValueError):
    pass


class NotInKernel(HMFThetaError, ValueError):
    """Support of an expansion is not contained in the scaled sublattice."""

    def __init__(self, message, exponent=None):
        super().__init__(message)
        self.exponent = exponent


class TruncationTooSmall(HMFThetaError, ValueError):
    pass


class NotAUnit(HMFThetaError, ValueError):
    pass
