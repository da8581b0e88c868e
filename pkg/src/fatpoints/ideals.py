"""Ideal arithmetic: Buchberger's algorithm plus sums, products, powers,
elimination-based intersection, membership, and equality.

The engine keeps coefficients in fast native forms: residues for GF(p)
(basis elements monic), primitive integer vectors for Q (content 1,
positive leading coefficient); reduction over Q runs in Fractions
against the integer basis.  Homogeneous inputs are processed degree by
degree, so a partial run certifies every degree up to its bound; that is
what degree-truncated membership relies on.  All results are
deterministic for a fixed input and monomial order.
"""

from __future__ import annotations

import heapq
import math
import threading
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Optional, Sequence

from .errors import ResourceLimit, RingMismatch, ZeroIdeal
from .field import PrimeField
from .polyring import Block, Polynomial, Ring

DEFAULT_DEGREE_CAP = 40
DEFAULT_PAIR_CAP = 2_000_000


@dataclass
class Budget:
    """Per-operation resource limits; exceeding one raises ResourceLimit."""

    degree_cap: int = DEFAULT_DEGREE_CAP
    pair_cap: int = DEFAULT_PAIR_CAP
    deadline: Optional[float] = None  # absolute time.monotonic() value

    def check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceLimit("time budget exhausted", kind="time")


DEFAULT_BUDGET = Budget()


def _neg_key(key: tuple) -> tuple:
    return tuple(
        -part if isinstance(part, int) else tuple(-x for x in part) for part in key
    )


def _divides(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


class _BasisElem:
    __slots__ = ("lm", "deg", "lc", "items", "index")

    def __init__(self, lm, deg, lc, items, index):
        self.lm = lm
        self.deg = deg
        self.lc = lc
        self.items = items  # ((exp, coeff), ...) with the lead first
        self.index = index


# -- raw-coefficient conversions -------------------------------------------


def _poly_to_raw(poly: Polynomial, key) -> dict:
    """Primitive integer form over Q, monic residues over GF(p)."""
    field = poly.ring.field
    coeffs = poly.coefficients_raw()
    if isinstance(field, PrimeField):
        lm = max(coeffs, key=key)
        inv = field.inv(coeffs[lm])
        return {e: c * inv % field.p for e, c in coeffs.items()}
    den = 1
    for c in coeffs.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = {e: int(c * den) for e, c in coeffs.items()}
    return _int_normalize(ints, key)


def _int_normalize(coeffs: dict, key) -> dict:
    g = 0
    for c in coeffs.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    lm = max(coeffs, key=key)
    if coeffs[lm] < 0:
        g = -g
    if g not in (0, 1):
        coeffs = {e: c // g for e, c in coeffs.items()}
    return coeffs


def _raw_to_poly(ring: Ring, coeffs: dict, key, monic: bool) -> Polynomial:
    field = ring.field
    if isinstance(field, PrimeField):
        out = dict(coeffs)
        if monic and out:
            lm = max(out, key=key)
            inv = field.inv(out[lm])
            out = {e: c * inv % field.p for e, c in out.items()}
        return Polynomial(ring, out, _trusted=True)
    if monic and coeffs:
        lm = max(coeffs, key=key)
        lc = coeffs[lm]
        return Polynomial(
            ring, {e: Fraction(c, lc) for e, c in coeffs.items()}, _trusted=True
        )
    return Polynomial(ring, {e: Fraction(c) for e, c in coeffs.items()}, _trusted=True)


def _fraction_normalize(coeffs: dict, key) -> dict:
    """Fraction-valued dict -> primitive integer dict."""
    den = 1
    for c in coeffs.values():
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = {e: int(c * den) for e, c in coeffs.items()}
    return _int_normalize(ints, key)


# -- reduction ---------------------------------------------------------------


def _find_reducer(m: tuple, reducers: list[_BasisElem]) -> Optional[_BasisElem]:
    md = sum(m)
    for g in reducers:
        if g.deg <= md and _divides(g.lm, m):
            return g
    return None


def _reduce_raw(work_in: dict, reducers: list[_BasisElem], key, char_p: int,
                early_stop: bool = False, budget: Optional[Budget] = None) -> dict:
    """Remainder of division by the reducer list.

    Over Q (char_p == 0) the work dict holds Fractions and reducers hold
    primitive integers; over GF(p) everything is residues mod p.
    """
    if not work_in:
        return {}
    if char_p == 0:
        work = {e: Fraction(c) if not isinstance(c, Fraction) else c
                for e, c in work_in.items()}
    else:
        work = dict(work_in)
    rem: dict = {}
    heap = [(_neg_key(key(e)), e) for e in work]
    heapq.heapify(heap)
    steps = 0
    while heap:
        _, m = heapq.heappop(heap)
        c = work.pop(m, None)
        if c is None:
            continue
        steps += 1
        if budget is not None and steps % 256 == 0:
            budget.check_time()
        g = _find_reducer(m, reducers)
        if g is None:
            rem[m] = rem.get(m, 0) + c if char_p == 0 else (rem.get(m, 0) + c) % char_p
            if early_stop:
                return rem
            continue
        if char_p == 0:
            factor = c / g.lc
            for e, gc in g.items[1:]:
                tgt = tuple(a + b - l for a, b, l in zip(m, e, g.lm))
                v = work.get(tgt)
                if v is None:
                    nv = -factor * gc
                    if nv:
                        work[tgt] = nv
                        heapq.heappush(heap, (_neg_key(key(tgt)), tgt))
                else:
                    nv = v - factor * gc
                    if nv:
                        work[tgt] = nv
                    else:
                        del work[tgt]
        else:
            factor = c  # basis is monic mod p
            for e, gc in g.items[1:]:
                tgt = tuple(a + b - l for a, b, l in zip(m, e, g.lm))
                v = work.get(tgt)
                if v is None:
                    nv = -factor * gc % char_p
                    if nv:
                        work[tgt] = nv
                        heapq.heappush(heap, (_neg_key(key(tgt)), tgt))
                else:
                    nv = (v - factor * gc) % char_p
                    if nv:
                        work[tgt] = nv
                    else:
                        del work[tgt]
    return rem


def _spoly_raw(f: _BasisElem, g: _BasisElem, char_p: int) -> dict:
    lcm = tuple(max(a, b) for a, b in zip(f.lm, g.lm))
    uf = tuple(a - b for a, b in zip(lcm, f.lm))
    ug = tuple(a - b for a, b in zip(lcm, g.lm))
    out: dict = {}
    if char_p == 0:
        for e, c in f.items:
            out[tuple(a + b for a, b in zip(e, uf))] = c * g.lc
        for e, c in g.items:
            tgt = tuple(a + b for a, b in zip(e, ug))
            v = out.get(tgt, 0) - c * f.lc
            if v:
                out[tgt] = v
            else:
                out.pop(tgt, None)
    else:
        for e, c in f.items:
            out[tuple(a + b for a, b in zip(e, uf))] = c
        for e, c in g.items:
            tgt = tuple(a + b for a, b in zip(e, ug))
            v = (out.get(tgt, 0) - c) % char_p
            if v:
                out[tgt] = v
            else:
                out.pop(tgt, None)
    return out


# -- the Buchberger engine ---------------------------------------------------


class _Engine:
    """Incremental Buchberger state, resumable across degree bounds."""

    def __init__(self, ring: Ring, gens: Sequence[Polynomial]):
        self.ring = ring
        self.key = ring.sort_key
        self.char_p = ring.field.characteristic
        self.homogeneous = all(g.is_homogeneous() for g in gens)
        self.basis: list[_BasisElem] = []
        self.reducers: list[_BasisElem] = []  # sorted by (deg, lm key)
        self.pairs: list = []
        self.handled: set[tuple[int, int]] = set()
        self.pair_count = 0
        self.complete = False
        self.certified = -1
        self.generation = 0
        for g in sorted(gens, key=lambda p: (p.degree, self.key(p.leading_monomial().exponents))):
            raw = _poly_to_raw(g, self.key)
            self._insert(raw)
        if not self.pairs:
            self.complete = True

    def _insert(self, raw: dict):
        lm = max(raw, key=self.key)
        items = tuple(
            sorted(raw.items(), key=lambda kv: self.key(kv[0]), reverse=True)
        )
        elem = _BasisElem(lm, sum(lm), raw[lm], items, len(self.basis))
        for old in self.basis:
            pair = (old.index, elem.index)
            lcm = tuple(max(a, b) for a, b in zip(old.lm, elem.lm))
            if lcm == tuple(a + b for a, b in zip(old.lm, elem.lm)):
                self.handled.add(pair)  # coprime lead terms
                continue
            heapq.heappush(
                self.pairs, (sum(lcm), self.key(lcm), pair[0], pair[1], lcm)
            )
        self.basis.append(elem)
        pos = 0
        rk = (elem.deg, self.key(elem.lm))
        while pos < len(self.reducers) and (
            self.reducers[pos].deg,
            self.key(self.reducers[pos].lm),
        ) < rk:
            pos += 1
        self.reducers.insert(pos, elem)
        self.generation += 1

    def _chain_skip(self, i: int, j: int, lcm: tuple) -> bool:
        for k_elem in self.reducers:
            k = k_elem.index
            if k == i or k == j:
                continue
            if k_elem.deg > sum(lcm):
                break
            if not _divides(k_elem.lm, lcm):
                continue
            a = (min(i, k), max(i, k))
            b = (min(j, k), max(j, k))
            if a in self.handled and b in self.handled:
                return True
        return False

    def advance(self, max_degree: Optional[int], budget: Budget):
        if self.complete:
            return
        while self.pairs:
            deg = self.pairs[0][0]
            if max_degree is not None and deg > max_degree:
                if self.homogeneous:
                    self.certified = max(self.certified, max_degree)
                return
            if deg > budget.degree_cap:
                raise ResourceLimit(
                    f"pair degree {deg} exceeds cap {budget.degree_cap}",
                    kind="degree",
                )
            budget.check_time()
            _, _, i, j, lcm = heapq.heappop(self.pairs)
            self.pair_count += 1
            if self.pair_count > budget.pair_cap:
                raise ResourceLimit(
                    f"pair budget {budget.pair_cap} exhausted", kind="pairs"
                )
            if self.homogeneous:
                self.certified = max(self.certified, deg - 1)
            if self._chain_skip(i, j, lcm):
                self.handled.add((i, j))
                continue
            self.handled.add((i, j))
            s = _spoly_raw(self.basis[i], self.basis[j], self.char_p)
            if not s:
                continue
            r = _reduce_raw(s, self.reducers, self.key, self.char_p, budget=budget)
            if not r:
                continue
            if self.char_p == 0:
                r = _fraction_normalize(r, self.key)
            else:
                lm = max(r, key=self.key)
                inv = pow(r[lm], self.char_p - 2, self.char_p)
                r = {e: c * inv % self.char_p for e, c in r.items()}
            self._insert(r)
        self.complete = True
        self.certified = None  # certified at every degree


def _interreduce_raw(elems: list[_BasisElem], key, char_p: int,
                     budget: Optional["Budget"] = None) -> list[dict]:
    """Minimal then fully reduced basis from a list of raw elements."""
    ordered = sorted(elems, key=lambda e: (e.deg, key(e.lm)))
    kept: list[_BasisElem] = []
    for e in ordered:
        if any(_divides(k.lm, e.lm) for k in kept):
            continue
        kept.append(e)
    out: list[dict] = []
    for e in kept:
        if budget is not None:
            budget.check_time()
        others = [k for k in kept if k is not e]
        head = {e.lm: e.items[0][1]}
        tail = dict(e.items[1:])
        r = _reduce_raw(tail, others, key, char_p, budget=budget)
        if char_p == 0:
            merged = {m: Fraction(c) for m, c in head.items()}
            for m, c in r.items():
                merged[m] = merged.get(m, Fraction(0)) + c
            out.append(_fraction_normalize(merged, key))
        else:
            merged = dict(head)
            for m, c in r.items():
                merged[m] = (merged.get(m, 0) + c) % char_p
            out.append(merged)
    return out


# -- the ideal ---------------------------------------------------------------


class Ideal:
    """A polynomial ideal with cached, resumable Groebner state."""

    def __init__(self, ring: Ring, generators: Iterable[Polynomial]):
        self.ring = ring
        gens = []
        for g in generators:
            if not isinstance(g, Polynomial):
                raise TypeError(f"generator {g!r} is not a Polynomial")
            if g.ring != ring:
                raise RingMismatch("generator from a different ring")
            if not g.is_zero():
                gens.append(g)
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self._engine: Optional[_Engine] = None
        self._gb_cache: dict = {}
        self._lock = threading.RLock()

    # -- basics ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.generators

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def min_degree(self) -> int:
        """Least degree of a nonzero element (for homogeneous ideals)."""
        if not self.generators:
            raise ZeroIdeal("zero ideal has no minimal degree")
        return min(g.degree for g in self.generators)

    def max_generator_degree(self) -> int:
        if not self.generators:
            raise ZeroIdeal("zero ideal has no generators")
        return max(g.degree for g in self.generators)

    def _get_engine(self) -> _Engine:
        with self._lock:
            if self._engine is None:
                self._engine = _Engine(self.ring, self.generators)
            return self._engine

    # -- Groebner bases ------------------------------------------------------

    def groebner(self, budget: Optional[Budget] = None) -> tuple[Polynomial, ...]:
        """The reduced monic Groebner basis (unique for the ring order)."""
        if not self.generators:
            return ()
        cached = self._gb_cache.get("full")
        if cached is not None:
            return cached
        with self._lock:
            cached = self._gb_cache.get("full")
            if cached is not None:
                return cached
            eng = self._get_engine()
            eng.advance(None, budget or DEFAULT_BUDGET)
            gb = self._snapshot(eng, None, budget)
            self._gb_cache["full"] = gb
            return gb

    def groebner_upto(self, degree: int, budget: Optional[Budget] = None) -> tuple[Polynomial, ...]:
        """Elements of the reduced basis of degree <= the bound, certified
        complete through that degree (homogeneous ideals only)."""
        if not self.generators:
            return ()
        full = self._gb_cache.get("full")
        if full is None:
            with self._lock:
                full = self._gb_cache.get("full")
                if full is None:
                    eng = self._get_engine()
                    if not eng.homogeneous:
                        full = self.groebner(budget)
                    else:
                        key = ("upto", degree, eng.generation)
                        cached = self._gb_cache.get(key)
                        if cached is not None:
                            return cached
                        eng.advance(degree, budget or DEFAULT_BUDGET)
                        if eng.complete:
                            full = self._snapshot(eng, None, budget)
                            self._gb_cache["full"] = full
                        else:
                            gb = self._snapshot(eng, degree, budget)
                            self._gb_cache[("upto", degree, eng.generation)] = gb
                            return gb
        return tuple(g for g in full if g.degree <= degree)

    def _snapshot(self, eng: _Engine, degree: Optional[int],
                  budget: Optional[Budget] = None) -> tuple[Polynomial, ...]:
        elems = eng.basis
        if degree is not None:
            elems = [e for e in elems if e.deg <= degree]
        reduced = _interreduce_raw(elems, eng.key, eng.char_p, budget)
        polys = [
            _raw_to_poly(self.ring, raw, eng.key, monic=True) for raw in reduced
        ]
        polys.sort(key=lambda p: (p.degree, eng.key(p.leading_monomial().exponents)))
        return tuple(polys)

    def set_known_groebner(self, gb: Sequence[Polynomial]):
        """Record an externally computed reduced basis (e.g. from elimination)."""
        self._gb_cache["full"] = tuple(gb)

    # -- membership ----------------------------------------------------------

    def normal_form(self, f: Polynomial, budget: Optional[Budget] = None) -> Polynomial:
        """Remainder of f under division by the reduced Groebner basis."""
        if f.ring != self.ring:
            raise RingMismatch("polynomial from a different ring")
        if f.is_zero() or not self.generators:
            return f
        budget = budget or DEFAULT_BUDGET
        if f.is_homogeneous() and self._get_engine().homogeneous:
            gb = self.groebner_upto(f.degree, budget)
        else:
            gb = self.groebner(budget)
        return _divide_by_set(f, gb, budget)

    def contains_poly(self, f: Polynomial, budget: Optional[Budget] = None) -> bool:
        if f.is_zero():
            return True
        if not self.generators:
            return False
        budget = budget or DEFAULT_BUDGET
        if f.is_homogeneous() and self._get_engine().homogeneous:
            gb = self.groebner_upto(f.degree, budget)
        else:
            gb = self.groebner(budget)
        eng = self._get_engine()
        reducers = _polys_to_reducers(gb, eng.key)
        raw = _poly_to_raw(f, eng.key)
        rem = _reduce_raw(raw, reducers, eng.key, eng.char_p, early_stop=True,
                          budget=budget)
        return not rem

    # -- operators -------------------------------------------------------------

    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_sum(self, other)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_product(self, other)

    def __pow__(self, k: int) -> "Ideal":
        return ideal_power(self, k)

    def __and__(self, other: "Ideal") -> "Ideal":
        return ideal_intersect(self, other)

    def __le__(self, other: "Ideal") -> bool:
        return ideal_contains(other, self)[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ideal):
            return NotImplemented
        return ideal_equal(self, other)

    __hash__ = None  # equality is semantic, not structural

    def __repr__(self) -> str:
        return f"Ideal({len(self.generators)} generators in {self.ring!r})"


def _polys_to_reducers(polys: Sequence[Polynomial], key) -> list[_BasisElem]:
    out = []
    for idx, p in enumerate(polys):
        raw = _poly_to_raw(p, key)
        lm = max(raw, key=key)
        items = tuple(sorted(raw.items(), key=lambda kv: key(kv[0]), reverse=True))
        out.append(_BasisElem(lm, sum(lm), raw[lm], items, idx))
    out.sort(key=lambda e: (e.deg, key(e.lm)))
    return out


def _divide_by_set(f: Polynomial, polys: Sequence[Polynomial],
                   budget: Optional[Budget] = None) -> Polynomial:
    ring = f.ring
    key = ring.sort_key
    char_p = ring.field.characteristic
    reducers = _polys_to_reducers(polys, key)
    rem = _reduce_raw(f.coefficients_raw(), reducers, key, char_p, budget=budget)
    if char_p == 0:
        return Polynomial(ring, {e: Fraction(c) for e, c in rem.items()}, _trusted=True)
    return Polynomial(ring, rem, _trusted=True)


def normal_form(f: Polynomial, ideal: Ideal, budget: Optional[Budget] = None) -> Polynomial:
    return ideal.normal_form(f, budget)


def groebner(ideal: Ideal, budget: Optional[Budget] = None) -> tuple[Polynomial, ...]:
    return ideal.groebner(budget)


def groebner_upto(ideal: Ideal, degree: int, budget: Optional[Budget] = None) -> tuple[Polynomial, ...]:
    return ideal.groebner_upto(degree, budget)


# -- generator-level interreduction ------------------------------------------


def autoreduce_generators(ring: Ring, gens: Sequence[Polynomial],
                          budget: Optional[Budget] = None) -> list[Polynomial]:
    """Drop generators whose normal form w.r.t. the others is zero."""
    key = ring.sort_key
    char_p = ring.field.characteristic
    live = [g for g in gens if not g.is_zero()]
    live.sort(key=lambda p: (p.degree, key(p.leading_monomial().exponents)))
    # deduplicate up to scalar by comparing raw primitive forms
    seen = set()
    unique = []
    for g in live:
        raw = _poly_to_raw(g, key)
        sig = tuple(sorted(raw.items()))
        if sig in seen:
            continue
        seen.add(sig)
        unique.append(g)
    live = unique
    elems = _polys_to_reducers(live, key)
    alive = [True] * len(live)
    idx = len(live) - 1
    while idx >= 0:
        if budget is not None:
            budget.check_time()
        reducers = [
            e for e in elems if alive[e.index] and e.index != idx
        ]
        if not reducers:
            break
        raw = _poly_to_raw(live[idx], key)
        rem = _reduce_raw(raw, reducers, key, char_p, early_stop=True, budget=budget)
        if not rem:
            alive[idx] = False
        idx -= 1
    return [g for i, g in enumerate(live) if alive[i]]


# -- ideal operations ----------------------------------------------------------


def _check_same_ring(a: Ideal, b: Ideal):
    if a.ring != b.ring:
        raise RingMismatch("ideals live in different rings")


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    _check_same_ring(a, b)
    seen = set()
    gens = []
    key = a.ring.sort_key
    for g in list(a.generators) + list(b.generators):
        raw = _poly_to_raw(g, key)
        sig = tuple(sorted(raw.items()))
        if sig not in seen:
            seen.add(sig)
            gens.append(g)
    return Ideal(a.ring, gens)


def ideal_product(a: Ideal, b: Ideal, budget: Optional[Budget] = None) -> Ideal:
    _check_same_ring(a, b)
    if a.is_zero() or b.is_zero():
        return Ideal(a.ring, [])
    products = []
    if a is b or (a.generators == b.generators):
        for f, g in combinations_with_replacement(a.generators, 2):
            if budget is not None:
                budget.check_time()
            products.append(f * g)
    else:
        for f in a.generators:
            if budget is not None:
                budget.check_time()
            for g in b.generators:
                products.append(f * g)
    return Ideal(a.ring, autoreduce_generators(a.ring, products, budget))


def ideal_power(a: Ideal, k: int, budget: Optional[Budget] = None) -> Ideal:
    if k < 0:
        raise ValueError("negative ideal power")
    if k == 0:
        return Ideal(a.ring, [a.ring.one()])
    result = a
    for _ in range(k - 1):
        result = ideal_product(result, a, budget)
    return result


def ideal_intersect(a: Ideal, b: Ideal, budget: Optional[Budget] = None) -> Ideal:
    """Intersection by elimination of a prepended auxiliary variable."""
    _check_same_ring(a, b)
    ring = a.ring
    if a.is_zero() or b.is_zero():
        return Ideal(ring, [])
    ext = Ring(ring.field, ring.nvars + 1, Block(1))
    shift = [i + 1 for i in range(ring.nvars)]
    t = ext.var(0)
    one = ext.one()
    gens = []
    for g in _input_basis(a, budget):
        gens.append(t * g.map_variables(ext, shift))
    for g in _input_basis(b, budget):
        gens.append((one - t) * g.map_variables(ext, shift))
    extended = Ideal(ext, gens)
    gb = extended.groebner(budget)
    back = [0] * ext.nvars
    for i in range(ring.nvars):
        back[i + 1] = i
    kept = []
    for p in gb:
        if all(e[0] == 0 for e in p.coefficients_raw()):
            kept.append(p.map_variables(ring, [ring.nvars - 1] + list(range(ring.nvars))))
    # map_variables above sends the dead auxiliary slot onto the last
    # variable; every kept exponent there is zero, so this is the plain
    # deletion of the auxiliary coordinate.
    result = Ideal(ring, kept)
    if kept:
        result.set_known_groebner(tuple(kept))
    return result


def _input_basis(ideal: Ideal, budget: Optional[Budget]) -> Sequence[Polynomial]:
    """Canonical generator list for elimination inputs."""
    return ideal.groebner(budget)


def ideal_contains(a: Ideal, b: Ideal, budget: Optional[Budget] = None
                   ) -> tuple[bool, Optional[Polynomial]]:
    """Whether a contains b; on failure also the first failing generator."""
    _check_same_ring(a, b)
    if b.is_zero():
        return True, None
    if a.is_zero():
        return False, b.generators[0]
    for g in b.generators:
        if not a.contains_poly(g, budget):
            return False, g
    return True, None


def ideal_equal(a: Ideal, b: Ideal, budget: Optional[Budget] = None) -> bool:
    """Equality via identical reduced monic Groebner bases."""
    _check_same_ring(a, b)
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    return a.groebner(budget) == b.groebner(budget)
