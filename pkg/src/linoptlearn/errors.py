"""Exception and warning types shared across the library."""


class LinoptError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(LinoptError):
    """Operands have incompatible shapes or mode counts."""


class NonUnitaryInput(LinoptError):
    """A complex transfer matrix failed the unitarity gate."""


class MalformedBlocks(LinoptError):
    """A real matrix does not have the [[A, B], [-B, A]] block structure."""


class ModeIndexOutOfRange(LinoptError):
    """A mode label falls outside 1..M."""


class InvalidParameter(LinoptError):
    """A numeric argument is outside its admissible range."""


class UnsupportedRegime(LinoptError):
    """The requested quantity is not defined for these parameters."""


class SingularMatrix(LinoptError):
    """A matrix required to be nonsingular is (numerically) singular."""


class DegenerateProbe(LinoptError):
    """Probe rejection sampling failed to produce non-parallel components."""


class TruncationRisk(LinoptError):
    """The requested state carries too much energy for the Fock cutoff."""


class BudgetExceeded(LinoptError):
    """The adaptive search would exceed its energy cap."""


class StageLimitReached(LinoptError):
    """The adaptive search exhausted all stages without terminating."""


class LinoptWarning(UserWarning):
    """Base class for library warnings."""


class ConvergenceWarning(LinoptWarning):
    """A truncated series or iteration did not reach the requested accuracy."""


class UndeterminedWarning(LinoptWarning):
    """A test carried no information (e.g. zero-energy probes)."""


class LogarithmBranchFailure(LinoptWarning):
    """A matrix logarithm sat on the branch cut; the input was perturbed."""
