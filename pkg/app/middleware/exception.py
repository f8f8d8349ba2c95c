def exception_message(e):
    return f"Exception[{type(e).__name__}] occurred. Details: {str(e)}"


class SparseRecoveryError(Exception):
    """Base class for every error raised by the toolkit"""


class DimensionMismatchError(SparseRecoveryError, ValueError):
    """Vector or index-set shapes do not agree with the sensing matrix"""


class RankDeficientError(SparseRecoveryError):
    """A column submatrix lost full column rank (degenerate dictionary draw)"""


class InvalidSpecError(SparseRecoveryError, ValueError):
    """A dictionary or experiment description is malformed"""


class InvalidSparsityError(SparseRecoveryError, ValueError):
    """Requested sparsity is outside 1..n"""


class ZeroSignalError(SparseRecoveryError, ValueError):
    """Noise cannot be scaled against a zero measurement vector"""


class NotEnoughCandidatesError(SparseRecoveryError, ValueError):
    """Fewer selectable indices remain than were requested"""


class DegenerateCandidatesError(SparseRecoveryError):
    """Fewer candidates with a nonzero projected norm than were requested"""


class ConfigInvalidError(SparseRecoveryError, ValueError):
    """Algorithm parameters violate their constraints"""


class GroundTruthRequiredError(SparseRecoveryError, ValueError):
    """A diagnostic needs the true signal"""


class BudgetExceededError(SparseRecoveryError):
    """Exhaustive support enumeration would exceed the configured budget"""


class InvalidParamsError(SparseRecoveryError, ValueError):
    """Bound parameters are outside their admissible range"""


class NoGuaranteeError(SparseRecoveryError):
    """The recovery theorem gives no guarantee for these constants"""


class NotModeledError(SparseRecoveryError):
    """No closed-form cost model exists for the algorithm"""
