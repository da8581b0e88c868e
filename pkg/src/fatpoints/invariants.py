"""Numerical characters of fat-point subschemes.

Everything the containment machinery consumes numerically is read off
the graded slices of a saturated fat-point ideal: the initial degree
``alpha``, the Hilbert function with the degree ``tau`` where it first
reaches (and keeps) its final value, the regularity, the total length
of the scheme, and — in the plane — the least degree ``beta`` whose
slice moves with no fixed curve.  A :class:`CharacterTable` bundles one
scaled symbolic power's worth of these numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ResourceLimit
from .field import GF, RationalField
from .ideals import Budget, Ideal
from .polyring import Polynomial, Ring, polynomial_gcd
from .schemes import (
    FatPointConfig,
    expected_slice_codim,
    slice_basis,
    slice_dim,
    symbolic_socle_degree,
)

__all__ = [
    "CharacterTable",
    "alpha",
    "fat_degree",
    "hilbert_profile",
]


@dataclass(frozen=True, eq=True)
class CharacterTable:
    """Numerical characters of one scaled symbolic power.

    Invariants: ``sigma == tau + 1 == reg``, and for every ``t >= tau``
    the Hilbert function equals ``C(t + N, N) - fat_degree``.  ``beta``
    is recorded only in the plane (``N == 2``) and is the least degree
    whose slice has dimension at least two and common factor one.
    """

    alpha: int
    hf: dict[int, int]
    tau: int
    sigma: int
    reg: int
    beta: Optional[int]
    fat_degree: int

    __hash__ = None  # hf is mutable; tables compare by value only


def fat_degree(config: FatPointConfig, scale: int = 1) -> int:
    """Length of the scaled scheme: sum of C(scale*m_i + N - 1, N)."""
    return expected_slice_codim(config, scale)


def alpha(target, scale: int = 1, budget: Optional[Budget] = None) -> int:
    """Least degree of a nonzero element.

    Accepts either an :class:`Ideal` (least generator degree, which for
    the ideals built here is the true initial degree) or a
    :class:`FatPointConfig`, where the scaled symbolic power's slices
    are scanned directly.
    """
    if isinstance(target, Ideal):
        return target.min_degree()
    config = target
    budget = budget or Budget()
    t = 1
    while slice_dim(config, scale, t) == 0:
        t += 1
        if t > budget.degree_cap:
            raise ResourceLimit(
                f"no nonzero slice below degree {budget.degree_cap}",
                kind="degree",
            )
    return t


_COPRIME_PRIMES = (2147483629, 2147483587, 2147483563, 2147483549, 2147483497)


def _coprime_mod_p(basis, p: int) -> bool:
    """Certify that primitive homogeneous forms have no common factor.

    A nonconstant common factor over Q is homogeneous and primitive, so
    it survives reduction mod any prime at full degree and divides the
    mod-p gcd.  A gcd of degree zero mod one prime therefore certifies
    coprimality over Q; a positive degree is inconclusive (p may be bad).
    """
    ring = basis[0].ring
    ring_p = Ring(GF(p), ring.nvars, ring.order)
    reduced = []
    for f in basis:
        coeffs = {e: int(c) % p for e, c in f.coefficients_raw().items()}
        g = Polynomial(ring_p, {e: c for e, c in coeffs.items() if c})
        if not g.is_zero():
            reduced.append(g)
    if len(reduced) < 2:
        return False
    g = reduced[0]
    for f in reduced[1:]:
        g = polynomial_gcd(g, f)
        if g.degree == 0:
            return True
    return False


def _slice_is_coprime(config: FatPointConfig, basis) -> bool:
    """Whether the slice's forms share no common factor (exact)."""
    if isinstance(config.field, RationalField):
        if any(_coprime_mod_p(basis, p) for p in _COPRIME_PRIMES):
            return True
    g = basis[0]
    for f in basis[1:]:
        g = polynomial_gcd(g, f)
        if g.degree == 0:
            return True
    return False


def _beta_plane(config: FatPointConfig, scale: int, start: int,
                budget: Budget) -> int:
    """Least degree whose slice is at least a pencil with no fixed curve."""
    t = start
    while True:
        if slice_dim(config, scale, t) >= 2:
            basis = slice_basis(config, scale, t, budget)
            if _slice_is_coprime(config, basis):
                return t
        t += 1
        if t > budget.degree_cap:
            raise ResourceLimit(
                f"no free pencil below degree {budget.degree_cap}",
                kind="degree",
            )


_PROFILE_CACHE: dict = {}


def hilbert_profile(config: FatPointConfig, scale: int = 1,
                    budget: Optional[Budget] = None) -> CharacterTable:
    """Characters of the scaled symbolic power, from its graded slices."""
    key = (config, scale)
    cached = _PROFILE_CACHE.get(key)
    if cached is not None:
        return cached
    budget = budget or Budget()
    N = config.dim
    deg = fat_degree(config, scale)
    tau = symbolic_socle_degree(config, scale, budget)
    sigma = tau + 1
    hf = {t: slice_dim(config, scale, t) for t in range(0, sigma + 1)}
    if hf[tau] != math.comb(tau + N, N) - deg:
        raise ResourceLimit(
            "slice count disagrees with the stable value at its own socle",
            kind="internal",
        )
    first = next((t for t, v in hf.items() if v > 0), None)
    a = first if first is not None else alpha(config, scale, budget)
    beta = _beta_plane(config, scale, a, budget) if N == 2 else None
    table = CharacterTable(
        alpha=a, hf=hf, tau=tau, sigma=sigma, reg=sigma,
        beta=beta, fat_degree=deg,
    )
    _PROFILE_CACHE[key] = table
    return table
