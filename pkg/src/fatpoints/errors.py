"""Shared exception types."""


class FieldMismatch(ValueError):
    """Operands belong to different coefficient fields."""


class RingMismatch(ValueError):
    """Operands belong to different polynomial rings."""


class LengthMismatch(ValueError):
    """Exponent vectors of unequal length were combined."""


class InvalidParams(ValueError):
    """A construction was asked for with inconsistent parameters."""


class ZeroIdeal(ValueError):
    """An operation that needs a nonzero ideal received the zero ideal."""


class ResourceLimit(RuntimeError):
    """A computation exceeded its degree, pair, or time budget."""

    def __init__(self, message: str, *, kind: str = "budget"):
        super().__init__(message)
        self.kind = kind
