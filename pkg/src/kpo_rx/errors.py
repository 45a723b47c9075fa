"""Exception types shared across the package."""


class KpoError(Exception):
    """Base class for all package-specific errors."""


class InvalidDimensionError(KpoError, ValueError):
    """Fock truncation dimension is too small or not a positive integer."""


class DimensionMismatchError(KpoError, ValueError):
    """Operands live on Fock spaces of different dimension."""


class TruncationError(KpoError, ValueError):
    """State does not fit the requested Fock truncation (tail population too large)."""


class LabelingError(KpoError, RuntimeError):
    """Eigenstate parity labeling failed (eigenvector is not a parity eigenstate)."""


class IntegrationError(KpoError, RuntimeError):
    """Time propagation failed to reach the requested tolerance or violated positivity."""


class NoResonanceError(KpoError, RuntimeError):
    """No selection-rule-allowed excited state within the detuning window."""


class CalibrationError(KpoError, RuntimeError):
    """Calibration search found no grid point near the target rotation angle."""
