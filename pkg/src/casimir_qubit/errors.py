"""Exception hierarchy.

Every failure raised by the library derives from :class:`CasimirQubitError`
so callers (and the CLI) can catch the whole family at once.
"""


class CasimirQubitError(Exception):
    """Base class for all library errors."""


# linear algebra
class NonDiagonalizable(CasimirQubitError):
    def __init__(self, residual: float, message: str = ""):
        self.residual = residual
        super().__init__(message or f"eigenbasis reconstruction residual {residual:.3e}")


class BranchCutEigenvalue(CasimirQubitError):
    pass


class LogOfSingular(CasimirQubitError):
    pass


# kinematics
class InvalidMode(CasimirQubitError):
    pass


# pseudo-density matrices
class ZeroChi(CasimirQubitError):
    pass


class ArtanhPole(CasimirQubitError):
    pass


class MasslessSpinor(CasimirQubitError):
    pass


class DecompositionFailure(CasimirQubitError):
    pass


class SingularRho(CasimirQubitError):
    pass


# special functions and regularized sums
class PoleAtOne(CasimirQubitError):
    pass


class InvalidA(CasimirQubitError):
    pass


class OrderTooLarge(CasimirQubitError):
    pass


class PoleAtNonPositiveInteger(CasimirQubitError):
    pass


class PoleDetected(CasimirQubitError):
    def __init__(self, location: float, message: str = ""):
        self.location = location
        super().__init__(message or f"pole at q = {location}")


# pipelines
class ExtrapolationUnstable(CasimirQubitError):
    pass


class NonConvergent(CasimirQubitError):
    pass


class TailEstimateFailure(CasimirQubitError):
    pass


class ConfigError(CasimirQubitError):
    pass
