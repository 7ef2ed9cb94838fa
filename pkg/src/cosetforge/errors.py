"""Exception hierarchy. CLI exit codes are keyed off these classes."""


class CosetForgeError(Exception):
    exit_code = 1


class DomainError(CosetForgeError, ValueError):
    """Invalid domain parameters (composite p, even or too-small n, ...)."""

    exit_code = 2


class EvenModulusError(DomainError):
    pass


class CapExceeded(CosetForgeError):
    """A size cap, sampling budget or retry cap was exceeded."""

    exit_code = 4


class SamplingBudgetExceeded(CapExceeded):
    pass


class VerificationError(CosetForgeError):
    exit_code = 3


class ConditionError(CosetForgeError):
    """The sufficient conditions for the shift algorithm do not hold."""

    exit_code = 3
