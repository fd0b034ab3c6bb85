"""Exception types raised by the library."""


class QDHMCError(Exception):
    """Base class for all library errors."""


class DomainError(QDHMCError, ValueError):
    """An argument lies outside the domain an operation accepts."""


class ConfigError(QDHMCError, ValueError):
    """An experiment, schedule or target configuration is invalid."""


class EvolutionError(QDHMCError, RuntimeError):
    """Quantum evolution could not be carried out (e.g. non-finite potential)."""


class DivergenceError(QDHMCError, RuntimeError):
    """A leapfrog trajectory produced non-finite values."""


class NormalizationError(QDHMCError, RuntimeError):
    """A statevector drifted away from unit norm."""


class InsufficientDataError(QDHMCError, ValueError):
    pass


class ZeroVarianceError(QDHMCError, ValueError):
    pass


class SizeGuardError(QDHMCError, ValueError):
    """Dense construction refused because the register is too large."""
