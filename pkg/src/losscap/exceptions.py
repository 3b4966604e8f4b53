"""Exception hierarchy shared by every losscap module."""


class LossCapError(Exception):
    """Base class for all losscap errors."""


class DomainError(LossCapError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class UnsupportedScaleError(LossCapError, ValueError):
    """The exact oracle refuses problem sizes beyond its guard."""


class UnsolvableNetworkError(LossCapError):
    """The traffic equations have no unique nonnegative solution."""


class InvalidRoutingError(LossCapError, ValueError):
    """A routing matrix violates the substochastic constraints."""


class InvalidStandardError(LossCapError):
    """The standard row of a sweep is itself inadmissible."""


class RecordParseError(LossCapError, ValueError):
    """Quarterly utilization records could not be parsed."""


class ConfigError(LossCapError, ValueError):
    """A planner or simulation configuration is inconsistent."""
