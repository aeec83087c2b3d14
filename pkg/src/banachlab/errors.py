"""Exception taxonomy shared by all modules."""


class LabError(Exception):
    """Base class for computational failures in this package."""


class PreconditionViolated(LabError):
    pass


class Exhausted(LabError):
    """A finite ground set ran out before a construction could finish."""


class BudgetExceeded(LabError):
    """A node/count budget was hit before an exact search completed."""


class UnsupportedCombination(LabError):
    pass


class UnsupportedSpec(LabError):
    pass


class NonConvergence(LabError):
    """Fixed-point iteration hit its cap before reaching tolerance."""


class InvalidSpec(LabError):
    pass


class ZeroCombination(LabError):
    """A requested normalized combination has zero norm."""


class OutOfTriangle(LabError):
    """Array entry requested below the diagonal of a triangular builtin."""


class InsufficientBlocks(LabError):
    pass


class ScheduleExhausted(LabError):
    """Estimation schedule ended before the oscillation target was met.

    Carries the best estimate found so far in ``estimate``.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class DegenerateSystem(LabError):
    """The supplied vectors are linearly dependent."""


class TooManyVectors(LabError):
    pass


class DegenerateArray(LabError):
    pass


class NotBimonotone(LabError):
    """Carries a concrete violating projection as ``witness``."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IndexOutOfRange(LabError):
    pass
