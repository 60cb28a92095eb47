"""Exception types raised by the setopt package.

Every error is a ValueError subclass so that callers who do not care about
the fine-grained taxonomy can catch a single familiar type.
"""


class SetOptError(ValueError):
    """Base class for all setopt errors."""


class InvalidDimensionError(SetOptError):
    """Dimension is not a positive integer, or vectors disagree in length."""


class InconsistentConeError(SetOptError):
    """Primal and dual cone descriptions contradict each other."""


class NonPointedConeError(SetOptError):
    """No dual witness of pointedness could be found."""


class InvalidAnchorError(SetOptError):
    """Anchor fails to be strictly positive on every dual generator."""


class ConeMismatchError(SetOptError):
    """Operands were built over different cones."""


class InvalidScalarError(SetOptError):
    """Scalar multiplier outside the admissible range (t >= 0)."""


class EmptyFamilyError(SetOptError):
    """A lattice operation received an empty family of values."""


class UnsupportedDimensionError(SetOptError):
    """Operation requires the exact planar regime (or d = 1) and got more."""


class OutOfDomainError(SetOptError):
    """Evaluation point lies outside the function's variable space."""


class InvalidDirectionError(SetOptError):
    """Scalarization direction lies outside the dual cone."""


class EmptyCandidateError(SetOptError):
    """No converged minimizer was available to build a candidate set."""


class InfeasibleProblemError(SetOptError):
    """All probed values were Empty (+infinity after scalarization)."""


class GeneratorLimitError(SetOptError):
    """A generator list exceeded the configured budget."""


class DerivativeMismatchError(SetOptError):
    """An analytic derivative callback disagrees with central differences."""


class InputFormatError(SetOptError):
    """Malformed problem, instance, or configuration input."""
