"""Exception types shared across the package."""


class QuamError(Exception):
    """Base class for all errors raised by :mod:`quam`."""


class InputError(QuamError, ValueError):
    """Bad arguments: wrong lengths, invalid indices, non-unitary gates."""


class DataError(QuamError, ValueError):
    """Malformed pattern data (ragged lines, bad characters, duplicates)."""


class InvariantError(QuamError, RuntimeError):
    """A state violated a structural invariant an operation relies on."""
