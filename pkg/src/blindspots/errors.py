"""Exception hierarchy.

Validation errors signal bad inputs or configuration; numerical errors signal
that a computation refused to proceed (undersampled quadrature, inadequate
window, failed iteration).  The CLI maps validation errors to exit code 2 and
numerical errors to exit code 3.
"""


class BlindspotsError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(BlindspotsError):
    """Bad input data or configuration."""


class NumericalError(BlindspotsError):
    """A numerical procedure refused to proceed or failed to converge."""


# -- validation ---------------------------------------------------------------

class ConfigError(ValidationError):
    pass


class NotSymplectic(ValidationError):
    pass


class ZeroNorm(ValidationError):
    pass


class WrongArity(ValidationError):
    pass


class NegativeTime(ValidationError):
    pass


class DissipativeUnsupported(ValidationError):
    pass


# -- numerical ----------------------------------------------------------------

class NotNormalized(NumericalError):
    pass


class BadQuadrature(NumericalError):
    pass


class ImaginaryResidue(NumericalError):
    pass


class WindowTooSmall(NumericalError):
    pass


class NonSymmetricWindow(NumericalError):
    pass


class NoClosure(NumericalError):
    pass


class DegenerateGeometry(NumericalError):
    pass


class DegenerateSpots(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class SingularJacobian(NumericalError):
    pass


class NoMinimum(NumericalError):
    pass


class NeverLifted(NumericalError):
    pass


class NeverPositive(NumericalError):
    pass
