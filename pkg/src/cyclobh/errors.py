"""Exception types raised by cyclobh."""


class CyclobhError(Exception):
    """Base class for all errors raised by this package."""


class BudgetExceeded(CyclobhError):
    pass


class DimensionMismatch(CyclobhError):
    pass


class IncompleteSamples(CyclobhError):
    pass


class ZeroPolynomial(CyclobhError):
    pass


class DegreeExceeded(CyclobhError):
    pass


class PairCollision(CyclobhError):
    pass


class NotPrime(CyclobhError):
    pass


class AccumulationMismatch(CyclobhError):
    """The rotated tau products of some index differ from d_N ** support size."""


class IllConditioned(CyclobhError):
    pass


class NotHomogeneous(CyclobhError):
    pass


class SingularMatrix(CyclobhError):
    pass


class RadiusExceeded(CyclobhError):
    pass


class NegativeWeight(CyclobhError):
    pass


class MissingTorusConstant(CyclobhError):
    pass


class NotBounded(CyclobhError):
    pass


class NonConvergence(CyclobhError):
    """Power iteration hit its cap; ``best`` holds the best lower bound seen."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
