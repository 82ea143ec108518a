"""Exception types shared across the package."""


class DamkitError(Exception):
    """Base class for all damkit errors."""


class InputError(DamkitError, ValueError):
    """Malformed input data: bad file contents, invalid weights, bad ids."""


class PreconditionError(DamkitError, ValueError):
    """An operation was called outside its contract (e.g. vertex not in the
    allowed set, terminals missing, parameter out of range)."""


class InvariantViolation(DamkitError, AssertionError):
    """An internal structural guarantee failed; indicates a bug or a corrupt
    externally supplied structure."""
