"""Exact coefficient fields: the rationals and prime fields GF(p).

Field elements are kept in canonical form throughout: rationals as
`fractions.Fraction` in lowest terms, prime-field elements as residues
in [0, p).  Moduli are limited to p < 2**31 so that products of two
residues always fit in 64-bit intermediates (the linear-algebra kernel
relies on this).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import FieldMismatch, InvalidParams

MAX_MODULUS = 2**31

RawScalar = Union[int, Fraction]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class CoefficientField:
    """Common interface for the two supported exact fields."""

    characteristic: int

    def normalize(self, value) -> RawScalar:
        raise NotImplementedError

    def from_int(self, n: int) -> RawScalar:
        raise NotImplementedError

    def from_string(self, text: str) -> RawScalar:
        raise NotImplementedError

    def to_string(self, value: RawScalar) -> str:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def div(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero

    def scalar(self, value) -> "Scalar":
        return Scalar(self, self.normalize(value))

    def __call__(self, value) -> "Scalar":
        return self.scalar(value)


@dataclass(frozen=True)
class RationalField(CoefficientField):
    """The field Q, with elements stored as Fractions in lowest terms."""

    characteristic: int = 0

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def normalize(self, value) -> Fraction:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch("scalar from a different field")
            return value.value
        raise TypeError(f"cannot coerce {value!r} into Q")

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def from_string(self, text: str) -> Fraction:
        text = text.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                return Fraction(int(num), int(den))
            return Fraction(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParams(f"cannot parse {text!r} as a rational") from exc

    def to_string(self, value: Fraction) -> str:
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return a / b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / Fraction(a)

    def __repr__(self) -> str:
        return "QQ"


@dataclass(frozen=True)
class PrimeField(CoefficientField):
    """GF(p) for a prime p < 2**31, elements stored as residues in [0, p)."""

    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise InvalidParams(f"modulus {self.p} is not prime")
        if self.p >= MAX_MODULUS:
            raise InvalidParams(f"modulus {self.p} exceeds 2**31")

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def normalize(self, value) -> int:
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, Scalar):
            if value.field != self:
                raise FieldMismatch("scalar from a different field")
            return value.value
        if isinstance(value, Fraction):
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError("denominator vanishes mod p")
            return value.numerator * pow(den, self.p - 2, self.p) % self.p
        raise TypeError(f"cannot coerce {value!r} into GF({self.p})")

    def from_int(self, n: int) -> int:
        return n % self.p

    def from_string(self, text: str) -> int:
        text = text.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                return self.div(int(num) % self.p, int(den) % self.p)
            return int(text) % self.p
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParams(f"cannot parse {text!r} as GF({self.p})") from exc

    def to_string(self, value: int) -> str:
        return str(value % self.p)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def __repr__(self) -> str:
        return f"GF({self.p})"


@dataclass(frozen=True)
class Scalar:
    """A field element tagged with its field, in canonical form."""

    field: CoefficientField
    value: RawScalar

    def _coerce(self, other) -> RawScalar:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field!r} vs {other.field!r}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        raise TypeError(f"cannot combine Scalar with {other!r}")

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._coerce(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._coerce(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._coerce(other)))

    def __rtruediv__(self, other):
        return Scalar(self.field, self.field.div(self._coerce(other), self.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        return self.field.to_string(self.value)

    def __repr__(self) -> str:
        return f"Scalar({self.field!r}, {self})"


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def scalar_from_string(field: CoefficientField, text: str) -> Scalar:
    """Round-trip partner of str(scalar)."""
    return Scalar(field, field.from_string(text))
