"""Exception hierarchy shared by all modules.

Each class maps to a CLI exit status: DomainError -> 2,
UnsupportedConfigurationError -> 3, InconsistencyError -> 4.
"""


class QmpolarError(Exception):
    """Base class for all package errors."""

    exit_status = 1


class DomainError(QmpolarError):
    """Input outside the mathematical domain of an operation."""

    exit_status = 2


class UnsupportedConfigurationError(QmpolarError):
    """Valid input the implementation deliberately refuses to handle."""

    exit_status = 3


class InconsistencyError(QmpolarError):
    """An integrality or identity that is a theorem failed; reportable bug."""

    exit_status = 4


class AmbiguousConductorError(UnsupportedConfigurationError):
    """2-adic conductor exponent is not determined by the known criteria."""


class DeskScaleExceededError(UnsupportedConfigurationError):
    """Computation exceeds the documented desk-scale bounds."""


class SearchExhaustedError(UnsupportedConfigurationError):
    """A bounded search window was exhausted without a decision."""
