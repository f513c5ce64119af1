"""Exception types raised across the package."""


class NPhaseError(Exception):
    """Base class for all errors raised by nphase."""


class InvalidStateError(NPhaseError, ValueError):
    """A matrix fails the density-matrix invariants."""


class DegenerateSteadyState(NPhaseError):
    """The Liouvillian kernel has more than one dimension."""

    def __init__(self, dimension: int):
        self.dimension = dimension
        super().__init__(f"steady state is not unique: kernel dimension {dimension}")


class NoDecay(NPhaseError):
    """All dissipative rates are zero, so no unique steady state exists."""


class StepTooLarge(NPhaseError, ValueError):
    """Integration step violates the ||L|| * dt < 0.1 stability bound."""


class NoInteriorState(NPhaseError):
    """Every optimizer start had vanishing phase knowledge."""


class ConfigError(NPhaseError, ValueError):
    """Base class for configuration errors; ``key`` names the offending entry."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class MissingKey(ConfigError):
    def __init__(self, key: str):
        super().__init__(key, "required key is missing")


class UnknownKey(ConfigError):
    def __init__(self, key: str):
        super().__init__(key, "unknown configuration key")


class OutOfRange(ConfigError):
    pass
