"""Exception types shared across the package."""


class AdinstError(Exception):
    """Base class for all errors raised by this package."""


class UnknownNameError(AdinstError):
    """A node, edge, or guard name is not declared where it is used."""


class SortMismatchError(AdinstError):
    """The same variable identifier occurs with two different sorts."""


class UnboundVariableError(AdinstError):
    """A variable is evaluated without an assignment in the valuation."""


class NotASubsignatureError(AdinstError):
    """A signature offered as a sub-signature is not contained in the full one."""


class SignatureMismatchError(AdinstError):
    """A structure or sentence is used against the wrong signature."""


class BoundaryMismatchError(AdinstError):
    """Morphism composition where the first target differs from the second source."""
