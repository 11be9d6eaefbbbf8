"""Exception types shared across the package.

Every guard in the numerical pipeline raises one of these instead of a bare
ValueError so callers (and the CLI exit-code mapping) can tell configuration
problems apart from runtime numerical failures.
"""


class PhaseshiftError(Exception):
    """Base class for all package-specific errors."""


class TabulatedGridMismatch(PhaseshiftError):
    """A tabulated potential's declared grid differs from the requested grid."""


class EvenPointCount(PhaseshiftError):
    """Grid point count is even (or too small) for composite Simpson."""


class WronskianViolation(PhaseshiftError):
    """Wave-function Wronskian drifted beyond tolerance; integration untrustworthy."""


class NonpositiveK(PhaseshiftError):
    """Wavenumber must be strictly positive."""


class GridMismatch(PhaseshiftError):
    """Operands were sampled on different grids."""


class OrderOutOfRange(PhaseshiftError):
    """Requested perturbation order is outside the supported range."""


class InsufficientFValues(PhaseshiftError):
    """Fewer correction values supplied than the requested order needs."""


class TruncationTooHigh(PhaseshiftError):
    """Truncation order exceeds the assembled series order."""


class DegenerateSweep(PhaseshiftError):
    """Coupling sweep unusable for order estimation (structure or noise floor).

    When every truncation sits below the noise floor the check is vacuous
    rather than wrong; `vacuous` is True then and `report` carries the
    all-INCONCLUSIVE result so callers can still present it.
    """

    def __init__(self, message: str, vacuous: bool = False, report=None):
        super().__init__(message)
        self.vacuous = vacuous
        self.report = report


class ConfigInvalid(PhaseshiftError):
    """Job configuration failed validation."""


class ComputationFailed(PhaseshiftError):
    """A numerical guard tripped while running a job."""
