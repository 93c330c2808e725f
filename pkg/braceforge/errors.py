"""Exception hierarchy shared by the algebra, parsers and CLI."""

from typing import Any


class BraceForgeError(Exception):
    """Base error; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class InvalidParams(BraceForgeError, ValueError):
    """Family parameters or a prime modulus are not admissible."""

    exit_code = 2


class ParseError(BraceForgeError, ValueError):
    """A brace or gamma document could not be read."""

    exit_code = 2


class ZeroInverse(BraceForgeError, ZeroDivisionError):
    """Inverse of zero requested in F_p."""

    exit_code = 3


class DimensionMismatch(BraceForgeError, ValueError):
    exit_code = 2


class Singular(BraceForgeError, ValueError):
    """Matrix is not invertible over F_p."""

    exit_code = 3


class IndexOutOfRange(BraceForgeError, IndexError):
    exit_code = 2


class PreconditionViolated(BraceForgeError):
    exit_code = 3


class RelationFailure(BraceForgeError):
    """A structural relation (group relation, table invariant) does not hold."""

    exit_code = 3


class ClosureFailure(BraceForgeError):
    exit_code = 3


class NotASubgroup(BraceForgeError):
    exit_code = 3


class WrongCardinality(BraceForgeError):
    exit_code = 2


class TooLarge(BraceForgeError):
    """Enumeration or search exceeds its configured bound."""

    exit_code = 4


class BudgetExceeded(BraceForgeError):
    """Cooperative time budget ran out; ``partial`` holds what was finished."""

    exit_code = 4

    def __init__(self, message: str, partial: Any = None):
        super().__init__(message)
        self.partial = partial
