"""Exception hierarchy.

Every error carries the CLI exit code of its family so the command layer can
map failures without a lookup table.
"""

from __future__ import annotations


class FrescalcError(Exception):
    """Base class; domain/invariant violations unless a subclass says otherwise."""

    exit_code = 3

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self), "exit_code": self.exit_code}


class ParseError(FrescalcError):
    exit_code = 2

    def __init__(self, message: str, position: int = -1, expected: tuple[str, ...] = ()):
        self.position = position
        self.expected = tuple(expected)
        detail = message
        if position >= 0:
            detail += f" at offset {position}"
        if expected:
            detail += f" (expected one of: {', '.join(expected)})"
        super().__init__(detail)

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["position"] = self.position
        d["expected"] = list(self.expected)
        return d


class DomainError(FrescalcError):
    exit_code = 3


class ExhaustedError(FrescalcError):
    """A configured bound (precision, iteration cap, window) was hit."""

    exit_code = 4


# ncalg
class LaurentNotAllowed(DomainError):
    pass


class NotAUnit(DomainError):
    pass


class ZeroElement(DomainError):
    pass


class LaurentWindowExceeded(ExhaustedError):
    pass


class PrecisionTooLow(ExhaustedError):
    pass


# fresco
class NotMonic(DomainError):
    pass


class NotHomogeneous(DomainError):
    pass


class NotDivisible(DomainError):
    def __init__(self, message: str, remainder=None):
        self.remainder = remainder
        if remainder is not None:
            message = f"{message}; remainder {remainder}"
        super().__init__(message)


class PrecisionExhausted(ExhaustedError):
    pass


class NotStabilized(ExhaustedError):
    pass


# gaussmanin
class DegenerateExponents(DomainError):
    pass


class DegenerateRecurrence(DomainError):
    pass


class NoClosure(ExhaustedError):
    pass


# poles
class LedgerError(DomainError):
    pass


class InconsistentLedger(DomainError):
    pass
