"""Exception hierarchy shared by all modules."""


class InvSemiError(Exception):
    """Base class for every error raised by the package."""


class InputError(InvSemiError, ValueError):
    """Malformed or inconsistent input.

    ``witness`` carries the offending elements (for example the triple
    ``(x, y, z)`` at which associativity fails) when one is available.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CapExceeded(InvSemiError):
    """A configured size or search-step cap was hit; the result is inconclusive."""


class InvariantFailure(InvSemiError, AssertionError):
    """An internal consistency check failed (a bug, not bad input)."""


class TheoryViolation(InvSemiError):
    """A computed object contradicts a proven structural property.

    Raised with the concrete witness so the instance can be reproduced.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
