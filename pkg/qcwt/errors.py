"""Exceptions raised by qcwt.

Every class also derives from the builtin exception that describes the
condition, so callers that only know about ValueError and friends still
catch them.
"""


class QcwtError(Exception):
    """Base class of all qcwt errors."""


class QuaternionDomainError(QcwtError, ZeroDivisionError):
    """Inverse of the zero quaternion."""


class GridMismatchError(QcwtError, ValueError):
    """Two operands live on different grids."""


class FormatError(QcwtError, ValueError):
    """A QSF or QCW file is malformed."""


class GuardExceededError(QcwtError, ValueError):
    """A brute-force computation was asked to do too much work."""


class AdmissibilityError(QcwtError, ArithmeticError):
    """The admissibility integral diverges or depends on the probe direction."""


class ConfigError(QcwtError, ValueError):
    """Invalid command line or configuration value."""
