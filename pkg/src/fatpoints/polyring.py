"""Multivariate polynomial rings over an exact coefficient field.

Polynomials are stored densely keyed by exponent vectors (tuples of
ints, one slot per variable).  Variables are named x0, x1, ...  The
default monomial order is graded reverse lexicographic: higher total
degree wins, ties go to the monomial with the smaller exponent in the
last variable where they differ.  A block order (eliminated variables
first, grevlex inside each block) is available for elimination work.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import FieldMismatch, LengthMismatch, RingMismatch
from .field import CoefficientField, Scalar


class Ordering(IntEnum):
    LT = -1
    EQ = 0
    GT = 1


def _grevlex_key(exponents: Sequence[int]) -> tuple:
    # Negating the reversed exponents turns "smaller exponent in the
    # last differing variable" into an ordinary tuple comparison.
    return (sum(exponents), tuple(-e for e in reversed(exponents)))


@dataclass(frozen=True)
class GrevLex:
    """Graded reverse lexicographic order."""

    def sort_key(self, exponents: Sequence[int]) -> tuple:
        return _grevlex_key(exponents)

    def __repr__(self) -> str:
        return "GrevLex()"


@dataclass(frozen=True)
class Block:
    """Elimination order: the first elim_count variables dominate.

    Each block is compared by the inner order (grevlex); a monomial
    involving an eliminated variable always exceeds one that does not.
    """

    elim_count: int
    inner: GrevLex = GrevLex()

    def sort_key(self, exponents: Sequence[int]) -> tuple:
        k = self.elim_count
        return _grevlex_key(exponents[:k]) + _grevlex_key(exponents[k:])

    def __repr__(self) -> str:
        return f"Block({self.elim_count})"


MonomialOrder = GrevLex | Block


@dataclass(frozen=True)
class Monomial:
    """An exponent vector with its cached total degree."""

    exponents: tuple[int, ...]
    degree: int = -1

    def __post_init__(self):
        if self.degree < 0:
            object.__setattr__(self, "degree", sum(self.exponents))
        if any(e < 0 for e in self.exponents):
            raise ValueError("negative exponent")

    def divides(self, other: "Monomial") -> bool:
        if len(self.exponents) != len(other.exponents):
            raise LengthMismatch("exponent vectors of different lengths")
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def __mul__(self, other: "Monomial") -> "Monomial":
        if len(self.exponents) != len(other.exponents):
            raise LengthMismatch("exponent vectors of different lengths")
        return Monomial(tuple(a + b for a, b in zip(self.exponents, other.exponents)))


def compare_monomials(a, b, order: MonomialOrder) -> Ordering:
    """Compare two monomials (or raw exponent tuples) under an order."""
    ea = a.exponents if isinstance(a, Monomial) else tuple(a)
    eb = b.exponents if isinstance(b, Monomial) else tuple(b)
    if len(ea) != len(eb):
        raise LengthMismatch(f"exponent lengths {len(ea)} != {len(eb)}")
    ka, kb = order.sort_key(ea), order.sort_key(eb)
    if ka < kb:
        return Ordering.LT
    if ka > kb:
        return Ordering.GT
    return Ordering.EQ


@dataclass(frozen=True)
class Ring:
    """K[x0..x{nvars-1}] with a fixed monomial order."""

    field: CoefficientField
    nvars: int
    order: MonomialOrder = GrevLex()

    def __post_init__(self):
        if self.nvars < 2:
            raise ValueError("need at least two variables")

    # -- construction -------------------------------------------------

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: self.field.one})

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, i: int) -> "Polynomial":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, {tuple(exps): self.field.one})

    @property
    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.var(i) for i in range(self.nvars))

    def monomial(self, exponents: Sequence[int], coeff=1) -> "Polynomial":
        exps = tuple(exponents)
        if len(exps) != self.nvars:
            raise LengthMismatch(f"expected {self.nvars} exponents")
        return Polynomial(self, {exps: coeff})

    def from_terms(self, terms: Iterable[tuple[Sequence[int], object]]) -> "Polynomial":
        acc: dict[tuple[int, ...], object] = {}
        for exps, coeff in terms:
            key = tuple(exps)
            if len(key) != self.nvars:
                raise LengthMismatch(f"expected {self.nvars} exponents")
            cur = acc.get(key, self.field.zero)
            acc[key] = self.field.add(cur, self.field.normalize(coeff))
        return Polynomial(self, acc)

    def parse(self, text: str) -> "Polynomial":
        return _parse_polynomial(self, text)

    def sort_key(self, exponents: Sequence[int]) -> tuple:
        return self.order.sort_key(exponents)

    def variable_name(self, i: int) -> str:
        return f"x{i}"

    def __repr__(self) -> str:
        return f"Ring({self.field!r}, nvars={self.nvars}, order={self.order!r})"


class Polynomial:
    """Immutable polynomial; coefficients kept in canonical field form."""

    __slots__ = ("ring", "_coeffs", "_degree")

    def __init__(self, ring: Ring, coeffs: dict, *, _trusted: bool = False):
        self.ring = ring
        if _trusted:
            self._coeffs = coeffs
        else:
            field = ring.field
            clean: dict[tuple[int, ...], object] = {}
            for exps, c in coeffs.items():
                v = field.normalize(c)
                if not field.is_zero(v):
                    clean[tuple(exps)] = v
            self._coeffs = clean
        self._degree = None

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if self._degree is None:
            self._degree = max((sum(e) for e in self._coeffs), default=-1)
        return self._degree

    def is_homogeneous(self) -> bool:
        it = iter(self._coeffs)
        first = next(it, None)
        if first is None:
            return True
        d = sum(first)
        return all(sum(e) == d for e in it)

    def __len__(self) -> int:
        return len(self._coeffs)

    @property
    def terms(self) -> tuple[tuple[Monomial, Scalar], ...]:
        """Terms in strictly descending monomial order."""
        field = self.ring.field
        key = self.ring.sort_key
        items = sorted(self._coeffs.items(), key=lambda kv: key(kv[0]), reverse=True)
        return tuple((Monomial(e), Scalar(field, c)) for e, c in items)

    def support(self) -> tuple[tuple[int, ...], ...]:
        key = self.ring.sort_key
        return tuple(sorted(self._coeffs, key=key, reverse=True))

    def leading_monomial(self) -> Monomial:
        if not self._coeffs:
            raise ValueError("zero polynomial has no leading monomial")
        return Monomial(max(self._coeffs, key=self.ring.sort_key))

    def leading_coefficient(self) -> Scalar:
        lm = max(self._coeffs, key=self.ring.sort_key)
        return Scalar(self.ring.field, self._coeffs[lm])

    def coefficient(self, monomial) -> Scalar:
        exps = monomial.exponents if isinstance(monomial, Monomial) else tuple(monomial)
        return Scalar(self.ring.field, self._coeffs.get(exps, self.ring.field.zero))

    def coefficients_raw(self) -> dict:
        return dict(self._coeffs)

    # -- arithmetic ----------------------------------------------------

    def _check_ring(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring!r} vs {other.ring!r}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = self.ring.constant(self._coerce_scalar(other))
        self._check_ring(other)
        field = self.ring.field
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            v = field.add(out.get(e, field.zero), c)
            if field.is_zero(v):
                out.pop(e, None)
            else:
                out[e] = v
        return Polynomial(self.ring, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        field = self.ring.field
        return Polynomial(
            self.ring, {e: field.neg(c) for e, c in self._coeffs.items()}, _trusted=True
        )

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = self.ring.constant(self._coerce_scalar(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _coerce_scalar(self, value):
        if isinstance(value, Scalar):
            if value.field != self.ring.field:
                raise FieldMismatch("scalar from a different field")
            return value.value
        return self.ring.field.normalize(value)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            field = self.ring.field
            c = self._coerce_scalar(other)
            if field.is_zero(c):
                return self.ring.zero()
            return Polynomial(
                self.ring,
                {e: field.mul(v, c) for e, v in self._coeffs.items()},
                _trusted=True,
            )
        self._check_ring(other)
        field = self.ring.field
        out: dict[tuple[int, ...], object] = {}
        small, large = self._coeffs, other._coeffs
        if len(small) > len(large):
            small, large = large, small
        for e1, c1 in small.items():
            for e2, c2 in large.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                v = field.add(out.get(key, field.zero), field.mul(c1, c2))
                if field.is_zero(v):
                    out.pop(key, None)
                else:
                    out[key] = v
        return Polynomial(self.ring, out, _trusted=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self._coeffs == other._coeffs

    def __hash__(self):
        items = tuple(sorted(self._coeffs.items(), key=lambda kv: kv[0]))
        return hash((self.ring, items))

    # -- structural maps -----------------------------------------------

    def dehomogenize(self, chart: int) -> "Polynomial":
        """Substitute the chart variable by 1 (same ring, exponent zeroed)."""
        if not 0 <= chart < self.ring.nvars:
            raise IndexError(f"chart index {chart} out of range")
        field = self.ring.field
        out: dict[tuple[int, ...], object] = {}
        for e, c in self._coeffs.items():
            key = e[:chart] + (0,) + e[chart + 1 :]
            v = field.add(out.get(key, field.zero), c)
            if field.is_zero(v):
                out.pop(key, None)
            else:
                out[key] = v
        return Polynomial(self.ring, out, _trusted=True)

    def map_variables(self, target: Ring, mapping: Sequence[int]) -> "Polynomial":
        """Send variable i of this ring to variable mapping[i] of target."""
        if len(mapping) != self.ring.nvars:
            raise LengthMismatch("mapping must cover every variable")
        if self.ring.field != target.field:
            raise FieldMismatch("rings over different fields")
        out: dict[tuple[int, ...], object] = {}
        for e, c in self._coeffs.items():
            exps = [0] * target.nvars
            for i, ei in enumerate(e):
                if ei:
                    exps[mapping[i]] += ei
            out[tuple(exps)] = c
        return Polynomial(target, out, _trusted=True)

    def monic(self) -> "Polynomial":
        if not self._coeffs:
            return self
        field = self.ring.field
        lc = self._coeffs[max(self._coeffs, key=self.ring.sort_key)]
        if lc == field.one:
            return self
        inv = field.inv(lc)
        return Polynomial(
            self.ring,
            {e: field.mul(c, inv) for e, c in self._coeffs.items()},
            _trusted=True,
        )

    # -- printing --------------------------------------------------------

    def _monomial_str(self, exps: tuple[int, ...]) -> str:
        parts = []
        for i, e in enumerate(exps):
            if e == 1:
                parts.append(self.ring.variable_name(i))
            elif e > 1:
                parts.append(f"{self.ring.variable_name(i)}^{e}")
        return "*".join(parts)

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        field = self.ring.field
        pieces = []
        for e, c in sorted(
            self._coeffs.items(), key=lambda kv: self.ring.sort_key(kv[0]), reverse=True
        ):
            mono = self._monomial_str(e)
            text = field.to_string(c)
            negative = text.startswith("-")
            if negative:
                text = text[1:]
            if mono:
                body = mono if text == "1" else f"{text}*{mono}"
            else:
                body = text
            if not pieces:
                pieces.append(f"-{body}" if negative else body)
            else:
                pieces.append(f"- {body}" if negative else f"+ {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"<{self} over {self.ring.field!r}>"


# -- degree-slice enumeration ---------------------------------------------


def monomials_of_degree(ring: Ring, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of the given total degree, descending order."""
    if degree < 0:
        return []
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int, slot: int):
        if slot == ring.nvars - 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slot + 1)

    rec([], degree, 0)
    out.sort(key=ring.sort_key, reverse=True)
    return out


def slice_dimension_bound(nvars: int, degree: int) -> int:
    """Number of monomials of the given degree: C(degree + n - 1, n - 1)."""
    return math.comb(degree + nvars - 1, nvars - 1)


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(x\d+|\d+|\^|\*|\+|-|/)")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"unexpected input at {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def _parse_polynomial(ring: Ring, text: str) -> Polynomial:
    """Parse sums of terms like '2*x0^2*x1 - 1/3*x2^3 + 4'."""
    tokens = _tokenize(text)
    if not tokens:
        raise ValueError("empty polynomial text")
    field = ring.field
    pos = 0
    total = ring.zero()

    def parse_factor():
        nonlocal pos
        tok = tokens[pos]
        if tok.startswith("x"):
            idx = int(tok[1:])
            if idx >= ring.nvars:
                raise ValueError(f"variable {tok} outside ring with {ring.nvars} variables")
            pos += 1
            exp = 1
            if pos < len(tokens) and tokens[pos] == "^":
                pos += 1
                if pos >= len(tokens) or not tokens[pos].isdigit():
                    raise ValueError("expected integer exponent after '^'")
                exp = int(tokens[pos])
                pos += 1
            exps = [0] * ring.nvars
            exps[idx] = exp
            return ring.monomial(exps)
        if tok.isdigit():
            num = int(tok)
            pos += 1
            if pos + 1 < len(tokens) and tokens[pos] == "/" and tokens[pos + 1].isdigit():
                den = int(tokens[pos + 1])
                pos += 2
                if den == 0:
                    raise ZeroDivisionError("zero denominator in coefficient")
                value = field.div(field.from_int(num), field.from_int(den))
            else:
                value = field.from_int(num)
            return ring.constant(value)
        raise ValueError(f"unexpected token {tok!r}")

    def parse_term():
        nonlocal pos
        f = parse_factor()
        while pos < len(tokens) and tokens[pos] == "*":
            pos += 1
            f = f * parse_factor()
        return f

    sign = 1
    first = True
    while pos < len(tokens):
        tok = tokens[pos]
        if tok in "+-":
            sign = 1 if tok == "+" else -1
            pos += 1
            if pos >= len(tokens):
                raise ValueError("dangling sign")
        elif not first:
            raise ValueError(f"expected '+' or '-' before {tok!r}")
        term = parse_term()
        total = total + (term if sign == 1 else -term)
        sign = 1
        first = False
    return total


# -- limited multivariate GCD ----------------------------------------------
#
# Enough for the common-factor test on slice bases: strip monomial
# content, then a primitive pseudo-remainder sequence in the last active
# variable, recursing on coefficient contents.  Results are monic.


def _active_vars(coeffs: dict) -> list[int]:
    if not coeffs:
        return []
    n = len(next(iter(coeffs)))
    return [i for i in range(n) if any(e[i] for e in coeffs)]


def _monomial_content(f: Polynomial) -> tuple[int, ...]:
    exps = list(f._coeffs)
    return tuple(min(e[i] for e in exps) for i in range(f.ring.nvars))


def _divide_monomial(f: Polynomial, mono: tuple[int, ...]) -> Polynomial:
    out = {tuple(a - b for a, b in zip(e, mono)): c for e, c in f._coeffs.items()}
    return Polynomial(f.ring, out, _trusted=True)


def _as_univariate(f: Polynomial, var: int) -> dict[int, Polynomial]:
    buckets: dict[int, dict] = {}
    for e, c in f._coeffs.items():
        d = e[var]
        rest = e[:var] + (0,) + e[var + 1 :]
        buckets.setdefault(d, {})[rest] = c
    return {d: Polynomial(f.ring, coeffs, _trusted=True) for d, coeffs in buckets.items()}


def _from_univariate(ring: Ring, var: int, parts: dict[int, Polynomial]) -> Polynomial:
    out: dict[tuple[int, ...], object] = {}
    for d, poly in parts.items():
        for e, c in poly._coeffs.items():
            key = e[:var] + (d,) + e[var + 1 :]
            out[key] = c
    return Polynomial(ring, out, _trusted=True)


def _content_and_primitive(f: Polynomial, var: int) -> tuple[Polynomial, Polynomial]:
    parts = _as_univariate(f, var)
    content = None
    for d in sorted(parts):
        content = parts[d] if content is None else polynomial_gcd(content, parts[d])
        if content.degree == 0:
            content = f.ring.one()
            break
    quotients = {d: _exact_divide(p, content) for d, p in parts.items()}
    return content, _from_univariate(f.ring, var, quotients)


def _exact_divide(f: Polynomial, g: Polynomial) -> Polynomial:
    """Divide f by g assuming the division is exact."""
    if g.degree == 0:
        c = next(iter(g._coeffs.values()))
        inv = f.ring.field.inv(c)
        return f * Scalar(f.ring.field, inv)
    ring = f.ring
    field = ring.field
    rem = dict(f._coeffs)
    out: dict[tuple[int, ...], object] = {}
    g_items = list(g._coeffs.items())
    g_lm = max(g._coeffs, key=ring.sort_key)
    g_lc = g._coeffs[g_lm]
    key = ring.sort_key
    while rem:
        m = max(rem, key=key)
        c = rem[m]
        q = tuple(a - b for a, b in zip(m, g_lm))
        if any(e < 0 for e in q):
            raise ArithmeticError("inexact polynomial division")
        factor = field.div(c, g_lc)
        out[q] = factor
        for e, gc in g_items:
            tgt = tuple(a + b for a, b in zip(q, e))
            v = field.sub(rem.get(tgt, field.zero), field.mul(factor, gc))
            if field.is_zero(v):
                rem.pop(tgt, None)
            else:
                rem[tgt] = v
    return Polynomial(ring, out, _trusted=True)


def _pseudo_remainder(f: Polynomial, g: Polynomial, var: int) -> Polynomial:
    fu = _as_univariate(f, var)
    gu = _as_univariate(g, var)
    df, dg = max(fu), max(gu)
    lc_g = gu[dg]
    ring = f.ring
    while fu and max(fu) >= dg:
        d = max(fu)
        lc_f = fu[d]
        shift = d - dg
        new: dict[int, Polynomial] = {}
        degrees = set(fu) | {k + shift for k in gu}
        for k in degrees:
            a = fu.get(k, ring.zero()) * lc_g
            b = gu.get(k - shift, ring.zero()) * lc_f
            val = a - b
            if not val.is_zero():
                new[k] = val
        fu = new
    return _from_univariate(ring, var, fu)


def polynomial_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Monic GCD via monomial content plus a primitive remainder sequence."""
    if f.ring != g.ring:
        raise RingMismatch("gcd of polynomials from different rings")
    if f.is_zero():
        return g.monic()
    if g.is_zero():
        return f.monic()
    mono_f, mono_g = _monomial_content(f), _monomial_content(g)
    common = tuple(min(a, b) for a, b in zip(mono_f, mono_g))
    f = _divide_monomial(f, mono_f)
    g = _divide_monomial(g, mono_g)
    shared = sorted(set(_active_vars(f._coeffs)) & set(_active_vars(g._coeffs)))
    result = None
    if not shared:
        result = f.ring.one()
    else:
        var = shared[-1]
        cf, pf = _content_and_primitive(f, var)
        cg, pg = _content_and_primitive(g, var)
        content = polynomial_gcd(cf, cg)
        a, b = pf, pg
        if _as_univariate(a, var) and _as_univariate(b, var):
            da = max(_as_univariate(a, var))
            db = max(_as_univariate(b, var))
            if da < db:
                a, b = b, a
        while not b.is_zero():
            r = _pseudo_remainder(a, b, var)
            if r.is_zero():
                a = b
                break
            _, r = _content_and_primitive(r, var)
            a, b = b, r
            au, bu = _as_univariate(a, var), _as_univariate(b, var)
            if bu and max(au) < max(bu):
                a, b = b, a
        result = content * a
    mono = Polynomial(
        f.ring, {common: f.ring.field.one}, _trusted=True
    )
    return (mono * result).monic()
