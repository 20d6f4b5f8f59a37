"""Exception types raised by the library."""


class WeylmodError(Exception):
    """Base class for all library errors."""


class ZeroMomentumError(WeylmodError, ValueError):
    """Raised when a pointwise helicity construction is asked for p = 0."""


class SingularPointError(WeylmodError, ValueError):
    """Raised when a point lies (numerically) on the singular set of the flow."""


class NotInGroupError(WeylmodError, ValueError):
    """Raised when a matrix is not in SU(2,2) within tolerance."""


class SupportOverflowError(WeylmodError, ValueError):
    """Raised when a field's support would leave the periodic sampling box."""


class GridMismatchError(WeylmodError, ValueError):
    """Raised when two fields live on different grids."""


class AdmissibilityError(WeylmodError, ValueError):
    """Raised when a modular parameter lies outside the admissible window."""


class NotNormalizedError(WeylmodError, ValueError):
    """Raised when an entropy route receives a state without unit norm."""


class SupportViolationError(WeylmodError, ValueError):
    """Raised when an entropy route receives a state not localized in the unit ball."""


class ConfigError(WeylmodError, ValueError):
    """Invalid run configuration or input file."""

    def __init__(self, message, path=None):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
