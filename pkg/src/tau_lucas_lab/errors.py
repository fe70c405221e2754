"""Exception hierarchy shared by every module of the toolkit."""


class TauLabError(Exception):
    """Base class for all errors raised by tau_lucas_lab."""


class ZeroInputError(TauLabError, ValueError):
    pass


class NotPrimeError(TauLabError, ValueError):
    pass


class IncompleteFactorizationError(TauLabError):
    """A full factorization was required but the budget left a cofactor."""


class OverflowDomainError(TauLabError, OverflowError):
    pass


class BoundTooLargeError(TauLabError, ValueError):
    pass


class UnknownPrimeError(TauLabError, KeyError):
    pass


class InsufficientTableError(TauLabError):
    pass


class IoFailureError(TauLabError, OSError):
    pass


class FormatViolationError(TauLabError, ValueError):
    pass


class ZeroEigenvalueError(TauLabError, ValueError):
    pass


class ValuationTooLargeError(TauLabError, ValueError):
    pass


class OutsideDeligneRangeError(TauLabError, ValueError):
    pass


class DegeneratePairError(TauLabError, ValueError):
    """The ratio of the two roots is a root of unity."""


class RootOfUnityPairError(DegeneratePairError):
    pass


class NotADivisorError(TauLabError, ValueError):
    pass


class DegenerateDiscriminantError(TauLabError, ValueError):
    pass


class NonCoprimePairError(TauLabError, ValueError):
    pass


class CapExceededError(TauLabError, ValueError):
    pass


class InvalidEigenDataError(TauLabError, ValueError):
    pass
