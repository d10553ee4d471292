"""Exception hierarchy.

``ConfigError`` covers bad user input; everything else derived from
``NumericalError`` signals that a simulation could not be carried out
faithfully (truncation leaks, failed calibrations, ...).
"""


class CavityQEDError(Exception):
    """Base class for all package errors."""


class ConfigError(CavityQEDError, ValueError):
    pass


class NumericalError(CavityQEDError):
    pass


class TruncationError(NumericalError):
    """Amplitude would leak past the Fock-space cutoff."""


class DegenerateSuperpositionError(NumericalError):
    pass


class DimensionError(NumericalError, ValueError):
    pass


class SubspaceError(NumericalError):
    """State has support outside the subspace an operation is defined on."""


class CalibrationError(NumericalError):
    pass


class GridError(NumericalError):
    """Probe-frequency grid cannot resolve the requested features."""
