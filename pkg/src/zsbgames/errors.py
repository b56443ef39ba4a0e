"""Exception types shared across the package."""


class ZsbgError(Exception):
    """Base class for all package errors."""


class ValidationError(ZsbgError):
    """A game specification or derived object violates an invariant."""


class ParseError(ZsbgError):
    """A specification file is malformed."""


class CapacityError(ZsbgError):
    """A requested enumeration or LP would exceed the configured size limit."""


class NumericalError(ZsbgError):
    """The LP backend reported loss of precision or failed to converge."""


class SolverError(ZsbgError):
    """An LP that was expected to be solvable came back infeasible/unbounded."""


class DomainError(ZsbgError):
    """An argument is outside its mathematical domain."""
