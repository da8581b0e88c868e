"""Containment verdicts for symbolic versus ordinary powers.

Each claim about a fat-point configuration — a containment between a
symbolic power and a product ``M^j * (I^(m))^t``, an ideal equality, or
an inequality between numerical characters — is tested cell by cell
over a window of exponents and reported as a :class:`Verdict`.

Containment cells are decided criteria-first: two character-level
tests (a degree threshold against the regularity, and a slope test for
powers of a symbolic power) can certify a containment from slice
counts alone, which is far cheaper than Groebner reduction.  When no
criterion applies the two sides are constructed explicitly and decided
by reduction; a failed cell always carries a concrete witness.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from .errors import InvalidParams, ResourceLimit
from .field import PrimeField, RationalField
from .ideals import (
    Budget,
    Ideal,
    ideal_contains,
    ideal_equal,
    ideal_power,
    ideal_product,
)
from .invariants import alpha, hilbert_profile
from .polyring import Polynomial
from .schemes import (
    FatPointConfig,
    hyperplane_decomposition_sides,
    irrelevant_ideal,
    symbolic_ideal_from_slices,
)

__all__ = [
    "DEFAULT_SCREEN_PRIME",
    "Verdict",
    "Window",
    "all_claim_ids",
    "applicable_claim_ids",
    "check_containment",
    "claim_description",
    "claim_status",
    "criterion_genlemma",
    "criterion_postulational",
    "cross_check_criteria",
    "implication_checks",
    "modular_screen",
    "ordered_params",
    "run_claims",
]


DEFAULT_CELL_SECONDS = 120.0
DEFAULT_SCREEN_PRIME = 2147483629


@dataclass(frozen=True)
class Window:
    """Exponent ranges swept by the claim runners."""

    r: tuple[int, ...] = (1, 2)
    m: tuple[int, ...] = (1, 2, 3)
    t: tuple[int, ...] = (1, 2)


DEFAULT_WINDOW = Window()


_PARAM_ORDER = ("N", "n", "m", "r", "t", "j", "s", "p")


def _params_key(params: dict) -> tuple:
    return tuple(
        (k, params[k]) for k in _PARAM_ORDER if k in params
    ) + tuple(sorted((k, v) for k, v in params.items() if k not in _PARAM_ORDER))


def ordered_params(params: dict) -> dict:
    """The parameter dict rewritten in canonical report order."""
    return dict(_params_key(params))


@dataclass
class Verdict:
    """Outcome of one claim cell.

    ``holds`` is None for a cell skipped on a resource limit.  A false
    cell always carries a witness: the first left-hand generator that
    fails to reduce to zero, or the offending degree for a character
    claim.  ``method`` records how the cell was decided; criterion
    methods only ever certify a containment, never refute one.
    """

    claim_id: str
    params: dict
    holds: Optional[bool]
    witness: Union[Polynomial, int, None] = None
    method: str = "direct"
    generic_sampled: bool = False
    elapsed_ms: int = 0
    note: str = ""

    def sort_key(self) -> tuple:
        return (self.claim_id, _params_key(self.params))

    def witness_degree(self) -> Optional[int]:
        if self.witness is None:
            return None
        if isinstance(self.witness, Polynomial):
            return self.witness.degree
        return int(self.witness)


def _ms(t0: float) -> int:
    return int((time.monotonic() - t0) * 1000)


# -- cached ideal construction --------------------------------------------------

_ORDINARY_CACHE: dict = {}
_MIXED_CACHE: dict = {}
_IRRELEVANT_CACHE: dict = {}
_DIRECT_CACHE: dict = {}


def _sym(config: FatPointConfig, m: int, budget: Optional[Budget] = None) -> Ideal:
    return symbolic_ideal_from_slices(config, m, budget)


def _irrelevant_power(config: FatPointConfig, j: int,
                      budget: Optional[Budget] = None) -> Ideal:
    key = (config.field, config.dim, j)
    cached = _IRRELEVANT_CACHE.get(key)
    if cached is None:
        cached = ideal_power(irrelevant_ideal(config.ring()), j, budget)
        _IRRELEVANT_CACHE[key] = cached
    return cached


def _ordinary_power(config: FatPointConfig, m_base: int, k: int,
                    budget: Optional[Budget] = None) -> Ideal:
    """(I^(m_base))^k, memoized."""
    key = (config, m_base, k)
    cached = _ORDINARY_CACHE.get(key)
    if cached is None:
        cached = ideal_power(_sym(config, m_base, budget), k, budget)
        _ORDINARY_CACHE[key] = cached
    return cached


def _mixed_rhs(config: FatPointConfig, m_base: int, k: int, j: int,
               budget: Optional[Budget] = None) -> Ideal:
    """M^j * (I^(m_base))^k, memoized."""
    if j == 0:
        return _ordinary_power(config, m_base, k, budget)
    key = (config, m_base, k, j)
    cached = _MIXED_CACHE.get(key)
    if cached is None:
        cached = ideal_product(
            _irrelevant_power(config, j, budget),
            _ordinary_power(config, m_base, k, budget),
            budget,
        )
        _MIXED_CACHE[key] = cached
    return cached


def _direct_contains(config: FatPointConfig, m_sym: int, j: int, r_ord: int,
                     m_base: int, budget: Optional[Budget] = None) -> tuple:
    """Reduce every generator of I^(m_sym) against M^j * (I^(m_base))^r_ord.

    Returns (holds, witness).  Decided outcomes are memoized so that
    coinciding cells (and criterion hypotheses) are computed once;
    budget failures are never cached.
    """
    key = (config, m_sym, j, r_ord, m_base)
    cached = _DIRECT_CACHE.get(key)
    if cached is not None:
        return cached
    lhs = _sym(config, m_sym, budget)
    rhs = _mixed_rhs(config, m_base, r_ord, j, budget)
    ok, bad = ideal_contains(rhs, lhs, budget)
    result = (ok, None if ok else bad)
    _DIRECT_CACHE[key] = result
    return result


def _is_radical(config: FatPointConfig) -> bool:
    return all(m == 1 for m in config.mults)


def _is_char0(config: FatPointConfig) -> bool:
    return isinstance(config.field, RationalField)


# -- character-level containment criteria ---------------------------------------


def criterion_postulational(config: FatPointConfig, m: int, r: int,
                            budget: Optional[Budget] = None) -> Optional[bool]:
    """Degree-threshold test for I^(m) <= I^r over a reduced configuration.

    When r * reg(I) <= alpha(I^(m)), every generator of the symbolic
    power lives in degrees where the r-th ordinary power already has
    full postulation, so the containment follows.  Returns True when
    the threshold is met and None otherwise — never a refutation.
    """
    if not _is_radical(config):
        return None
    reg = hilbert_profile(config, 1, budget).reg
    if r * reg <= alpha(config, m, budget):
        return True
    return None


def criterion_genlemma(config: FatPointConfig, m: int, t: int, variant: str,
                       budget: Optional[Budget] = None) -> Optional[bool]:
    """Slope test for powers of a symbolic power.

    Variant "a" certifies I^(t(m+N-1)) <= M^(t(N-1)) (I^(m))^t when
    alpha of the left side is at least t*reg(I^(m)) + t(N-1).

    Variant "b" certifies I^(t(m+N-1)-(N-1)) <= M^((t-1)(N-1)) (I^(m))^t;
    it needs the plain containment into (I^(m))^t, which is established
    by direct reduction, together with the threshold
    alpha >= t*reg(I^(m)) + (t-1)(N-1).

    Returns True when certified, None when inconclusive.
    """
    N = config.dim
    prof = hilbert_profile(config, m, budget)
    if variant == "a":
        lhs_scale = t * (m + N - 1)
        if alpha(config, lhs_scale, budget) >= t * prof.reg + t * (N - 1):
            return True
        return None
    if variant == "b":
        lhs_scale = t * (m + N - 1) - (N - 1)
        if alpha(config, lhs_scale, budget) < t * prof.reg + (t - 1) * (N - 1):
            return None
        ok, _ = _direct_contains(config, lhs_scale, 0, t, m, budget)
        return True if ok else None
    raise InvalidParams(f"unknown criterion variant {variant!r}")


def _match_criterion(config: FatPointConfig, m_sym: int, j: int, r_ord: int,
                     m_base: int, budget: Optional[Budget]) -> Optional[str]:
    """Cheapest criterion that certifies I^(m_sym) <= M^j (I^(m_base))^r."""
    N = config.dim
    if j == 0 and m_base == 1:
        if criterion_postulational(config, m_sym, r_ord, budget):
            return "criterion-2.1"
    t = r_ord
    if m_sym == t * (m_base + N - 1) and j <= t * (N - 1):
        if criterion_genlemma(config, m_base, t, "a", budget):
            return "criterion-2.5a"
    if 0 < j <= (t - 1) * (N - 1) and m_sym == t * (m_base + N - 1) - (N - 1):
        if criterion_genlemma(config, m_base, t, "b", budget):
            return "criterion-2.5b"
    return None


# -- cell runners ----------------------------------------------------------------


def _containment_cell(config: FatPointConfig, m_sym: int, j: int, r_ord: int,
                      m_base: int, budget: Optional[Budget],
                      use_criteria: bool = True) -> tuple:
    """Decide I^(m_sym) <= M^j * (I^(m_base))^r_ord."""
    if use_criteria:
        hit = _match_criterion(config, m_sym, j, r_ord, m_base, budget)
        if hit is not None:
            return True, None, hit, ""
    ok, bad = _direct_contains(config, m_sym, j, r_ord, m_base, budget)
    return ok, bad, "direct", ""


def _equality_cell(lhs: Ideal, rhs: Ideal, budget: Optional[Budget]) -> tuple:
    """Decide lhs == rhs, witnessing a one-sided failure."""
    if ideal_equal(lhs, rhs, budget):
        return True, None, "direct", ""
    ok, bad = ideal_contains(rhs, lhs, budget)
    if not ok:
        return False, bad, "direct", "left side not inside right"
    ok, bad = ideal_contains(lhs, rhs, budget)
    return False, bad, "direct", "right side not inside left"


def check_containment(config: FatPointConfig, m_sym: int, j: int, r_ord: int,
                      base: Union[int, str] = "radical", *,
                      budget: Optional[Budget] = None,
                      use_criteria: bool = True,
                      claim_id: str = "CONTAIN") -> Verdict:
    """Decide I^(m_sym) <= M^j * B^r_ord and package the outcome.

    ``base`` selects B: the configuration's own ideal ("radical" or 1)
    or the symbolic power I^(m) for an integer m > 1.  Criteria are
    tried first; the direct route constructs both sides and reduces
    every left generator.
    """
    m_base = 1 if base in ("radical", None, 1) else int(base)
    if m_base < 1 or m_sym < 1 or j < 0 or r_ord < 1:
        raise InvalidParams("exponents must be positive (j may be zero)")
    t0 = time.monotonic()
    params = {"N": config.dim, "n": config.npoints,
              "m": m_sym, "j": j, "r": r_ord}
    if m_base != 1:
        params["base"] = m_base
    try:
        holds, witness, method, note = _containment_cell(
            config, m_sym, j, r_ord, m_base, budget, use_criteria
        )
    except ResourceLimit as exc:
        return Verdict(claim_id, params, None, None, "skipped",
                       config.sampled, _ms(t0), f"resource limit: {exc}")
    return Verdict(claim_id, params, holds, witness, method,
                   config.sampled, _ms(t0), note)


# -- claim registry ---------------------------------------------------------------


@dataclass(frozen=True)
class _Claim:
    claim_id: str
    status: str          # "conjecture" | "theorem" | "question"
    description: str
    applies: Callable[[FatPointConfig], bool]
    cells: Callable[[FatPointConfig, Window], list]


def _conic_odd(config: FatPointConfig) -> bool:
    return (config.label.startswith("conic(") and config.npoints >= 5
            and config.npoints % 2 == 1 and _is_radical(config))


def _star(config: FatPointConfig) -> bool:
    return (config.label.startswith("star(") and config.dim == 2
            and _is_radical(config))


def _in_hyperplane(config: FatPointConfig) -> bool:
    zero = config.field.zero
    return config.dim >= 2 and all(pt.coords[0] == zero for pt in config.points)


def _base_params(config: FatPointConfig) -> dict:
    return {"N": config.dim, "n": config.npoints}


def _contain_runner(config, m_sym, j, r_ord, m_base=1):
    def run(budget, use_criteria=True):
        return _containment_cell(config, m_sym, j, r_ord, m_base,
                                 budget, use_criteria)
    return run


def _character_runner(test):
    """Wrap an inequality check returning (holds, offending_degree)."""
    def run(budget, use_criteria=True):
        holds, value = test(budget)
        return holds, (None if holds else value), "character", ""
    return run


def _c31_cells(config, window):
    N = config.dim
    out = []
    for r in window.r:
        params = {**_base_params(config), "r": r}
        out.append((params, _contain_runner(config, r * N, r * (N - 1), r)))
    return out


def _c32_cells(config, window):
    N = config.dim
    return [
        ({**_base_params(config), "r": r},
         _contain_runner(config, r * N - (N - 1), 0, r))
        for r in window.r
    ]


def _c33_cells(config, window):
    a = alpha(config, 1)
    out = []
    for m in window.m:
        for r in window.r:
            # slope gate: m/r at least 2a/(a+1)
            if m * (a + 1) < 2 * a * r:
                continue
            params = {**_base_params(config), "m": m, "r": r}
            out.append((params, _contain_runner(config, m, 0, r)))
    return out


def _c34_cells(config, window):
    N = config.dim
    return [
        ({**_base_params(config), "r": r},
         _contain_runner(config, r * N - (N - 1), (r - 1) * (N - 1), r))
        for r in window.r
    ]


def _c35_cells(config, window):
    N = config.dim

    def make(r):
        def test(budget):
            lhs = alpha(config, r * N - (N - 1), budget)
            bound = r * alpha(config, 1, budget) + (r - 1) * (N - 1)
            return lhs >= bound, lhs
        return test

    return [
        ({**_base_params(config), "r": r}, _character_runner(make(r)))
        for r in window.r
    ]


def _c36_cells(config, window):
    N = config.dim

    def make(m, r):
        def test(budget):
            lhs = Fraction(alpha(config, m, budget) + N - 1, m + N - 1)
            rhs = Fraction(alpha(config, r, budget), r)
            return lhs <= rhs, alpha(config, m, budget)
        return test

    return [
        ({**_base_params(config), "m": m, "r": r}, _character_runner(make(m, r)))
        for m in window.m for r in window.r
    ]


def _c37_cells(config, window):
    N = config.dim
    return [
        ({**_base_params(config), "m": m, "t": t},
         _contain_runner(config, t * (m + N - 1), t, t, m))
        for m in window.m for t in window.t
    ]


def _c38_cells(config, window):
    N = config.dim
    return [
        ({**_base_params(config), "m": m, "t": t},
         _contain_runner(config, t * (m + N - 1), t * (N - 1), t, m))
        for m in window.m for t in window.t
    ]


def _c39a_cells(config, window):
    N = config.dim
    return [
        ({**_base_params(config), "m": m, "t": t},
         _contain_runner(config, t * (m + N - 1) - (N - 1), 0, t, m))
        for m in window.m for t in window.t
    ]


def _c39b_cells(config, window):
    N = config.dim
    return [
        ({**_base_params(config), "m": m, "t": t},
         _contain_runner(config, t * (m + N - 1) - (N - 1),
                         (t - 1) * (N - 1), t, m))
        for m in window.m for t in window.t
    ]


def _t22_cells(config, window):
    N = config.dim
    return [
        ({**_base_params(config), "m": m, "t": t},
         _contain_runner(config, t * (m + N - 1), 0, t, m))
        for m in window.m for t in window.t
    ]


def _l24_cells(config, window):
    return [
        ({**_base_params(config), "j": j},
         _contain_runner(config, j + 1, 1, 1, j))
        for j in window.m
    ]


def _l51_cells(config, window):
    def make(m, r):
        def run(budget, use_criteria=True):
            lhs = _sym(config, m * r, budget)
            rhs = _ordinary_power(config, m, r, budget)
            return _equality_cell(lhs, rhs, budget)
        return run

    return [
        ({**_base_params(config), "m": m, "r": r}, make(m, r))
        for m in window.m if m % 2 == 0
        for r in window.r
    ]


def _l52_cells(config, window):
    def make(r):
        def run(budget, use_criteria=True):
            lhs = _sym(config, 2 * r + 1, budget)
            rhs = ideal_product(
                _ordinary_power(config, 2, r, budget),
                _sym(config, 1, budget), budget,
            )
            return _equality_cell(lhs, rhs, budget)
        return run

    return [({**_base_params(config), "r": r}, make(r)) for r in window.r]


def _s6odd_cells(config, window):
    def make(j):
        def run(budget, use_criteria=True):
            lhs = _sym(config, 2 * j + 1, budget)
            rhs = ideal_product(
                _ordinary_power(config, 2, j, budget),
                _sym(config, 1, budget), budget,
            )
            return _equality_cell(lhs, rhs, budget)
        return run

    return [({**_base_params(config), "j": j}, make(j)) for j in window.t]


def _p71a_cells(config, window):
    N = config.dim
    return [
        ({**_base_params(config), "r": r},
         _contain_runner(config, r * (N + 1), r * N, r))
        for r in window.r
    ]


def _p71b_cells(config, window):
    N = config.dim

    def make(r):
        def run(budget, use_criteria=True):
            lo, mid = r * (N + 1) - N, r * N - (N - 1)
            ok, bad = ideal_contains(_sym(config, mid, budget),
                                     _sym(config, lo, budget), budget)
            if not ok:
                return False, bad, "direct", "upper link of the chain fails"
            return _containment_cell(config, mid, 0, r, 1, budget, use_criteria)
        return run

    return [({**_base_params(config), "r": r}, make(r)) for r in window.r]


def _p71c_cells(config, window):
    N = config.dim
    return [
        ({**_base_params(config), "r": r},
         _contain_runner(config, r * (N + 1) - N, (r - 1) * N, r))
        for r in window.r
    ]


def _p91_cells(config, window):
    N = config.dim

    def make(r):
        def test(budget):
            lhs = Fraction(alpha(config, 1, budget) + N - 1, N)
            rhs = Fraction(alpha(config, r, budget), r)
            return lhs <= rhs, alpha(config, r, budget)
        return test

    return [
        ({**_base_params(config), "r": r}, _character_runner(make(r)))
        for r in window.r if r <= N
    ]


def _p92_cells(config, window):
    N = config.dim
    return [
        ({**_base_params(config), "m": m, "t": t, "s": 1},
         _contain_runner(config, t * (N + m - 1) + 1, 1, t, m))
        for m in window.m for t in window.t
    ]


def _skoda_cells(config, window):
    N = config.dim

    def make(m):
        def test(budget):
            lhs = Fraction(alpha(config, m, budget), m)
            rhs = Fraction(alpha(config, 1, budget), N)
            return lhs >= rhs, alpha(config, m, budget)
        return test

    return [
        ({**_base_params(config), "m": m}, _character_runner(make(m)))
        for m in window.m
    ]


def _chudn_cells(config, window):
    def make(m):
        def test(budget):
            lhs = Fraction(alpha(config, m, budget), m)
            rhs = Fraction(alpha(config, 1, budget) + 1, 2)
            return lhs >= rhs, alpha(config, m, budget)
        return test

    return [
        ({**_base_params(config), "m": m}, _character_runner(make(m)))
        for m in window.m
    ]


def _hd_cells(config, window):
    def make(m):
        def run(budget, use_criteria=True):
            candidate, direct = hyperplane_decomposition_sides(config, m, budget)
            return _equality_cell(direct, candidate, budget)
        return run

    return [({**_base_params(config), "m": m}, make(m)) for m in window.m]


_CLAIMS: dict[str, _Claim] = {}


def _register(claim_id, status, description, applies, cells):
    _CLAIMS[claim_id] = _Claim(claim_id, status, description, applies, cells)


_register("C3.1", "conjecture",
          "I^(rN) inside M^(r(N-1)) I^r",
          lambda c: True, _c31_cells)
_register("C3.2", "conjecture",
          "I^(rN-(N-1)) inside I^r",
          _is_radical, _c32_cells)
_register("C3.3", "conjecture",
          "I^(m) inside I^r when m/r is at least 2*alpha/(alpha+1)",
          lambda c: _is_radical(c) and c.dim == 2, _c33_cells)
_register("C3.4", "conjecture",
          "I^(rN-(N-1)) inside M^((r-1)(N-1)) I^r",
          _is_radical, _c34_cells)
_register("C3.5", "conjecture",
          "alpha(I^(rN-(N-1))) at least r*alpha + (r-1)(N-1)",
          _is_radical, _c35_cells)
_register("C3.6", "conjecture",
          "(alpha(I^(m))+N-1)/(m+N-1) at most alpha(I^(r))/r",
          _is_radical, _c36_cells)
_register("C3.7", "conjecture",
          "I^(t(m+N-1)) inside M^t (I^(m))^t",
          _is_radical, _c37_cells)
_register("C3.8", "conjecture",
          "I^(t(m+N-1)) inside M^(t(N-1)) (I^(m))^t",
          _is_radical, _c38_cells)
_register("C3.9a", "conjecture",
          "I^(t(m+N-1)-(N-1)) inside (I^(m))^t",
          _is_radical, _c39a_cells)
_register("C3.9b", "conjecture",
          "I^(t(m+N-1)-(N-1)) inside M^((t-1)(N-1)) (I^(m))^t",
          _is_radical, _c39b_cells)
_register("T2.2", "theorem",
          "I^(t(m+N-1)) inside (I^(m))^t",
          _is_radical, _t22_cells)
_register("L2.4", "theorem",
          "I^(j+1) inside M I^(j) in characteristic zero",
          lambda c: _is_radical(c) and _is_char0(c), _l24_cells)
_register("Q2.6", "question",
          "I^(j+1) inside M I^(j) in positive characteristic",
          lambda c: _is_radical(c) and not _is_char0(c), _l24_cells)
_register("L5.1", "theorem",
          "I^(mr) equals (I^(m))^r for even m on an odd cluster of conic points",
          _conic_odd, _l51_cells)
_register("L5.2", "theorem",
          "I^(2r+1) equals (I^(2))^r I on an odd cluster of conic points",
          _conic_odd, _l52_cells)
_register("S6odd", "theorem",
          "I^(2j+1) equals (I^(2))^j I on a plane star",
          _star, _s6odd_cells)
_register("P7.1a", "theorem",
          "I^(r(N+1)) inside M^(rN) I^r for points in a hyperplane (char 0)",
          lambda c: _in_hyperplane(c) and _is_radical(c) and _is_char0(c),
          _p71a_cells)
_register("P7.1b", "theorem",
          "chain I^(r(N+1)-N) inside I^(rN-(N-1)) inside I^r for points in a hyperplane",
          lambda c: _in_hyperplane(c) and _is_radical(c), _p71b_cells)
_register("P7.1c", "theorem",
          "I^(r(N+1)-N) inside M^((r-1)N) I^r for points in a hyperplane (char 0)",
          lambda c: _in_hyperplane(c) and _is_radical(c) and _is_char0(c),
          _p71c_cells)
_register("P9.1", "theorem",
          "(alpha+N-1)/N at most alpha(I^(r))/r for r at most N (char 0)",
          lambda c: _is_radical(c) and _is_char0(c), _p91_cells)
_register("P9.2", "theorem",
          "I^(t(N+m-1)+s) inside M^s (I^(m))^t (char 0)",
          lambda c: _is_radical(c) and _is_char0(c), _p92_cells)
_register("SKODA", "theorem",
          "alpha(I^(m))/m at least alpha/N",
          _is_radical, _skoda_cells)
_register("CHUDN", "theorem",
          "alpha(I^(m))/m at least (alpha+1)/2 in the plane",
          lambda c: _is_radical(c) and c.dim == 2, _chudn_cells)
_register("HD", "theorem",
          "I^(m) decomposes over the hyperplane as sum of x0^(m-j) times lifted slices",
          lambda c: _in_hyperplane(c), _hd_cells)


def all_claim_ids() -> list[str]:
    return sorted(_CLAIMS)


def claim_status(claim_id: str) -> str:
    return _CLAIMS[claim_id].status


def claim_description(claim_id: str) -> str:
    return _CLAIMS[claim_id].description


def applicable_claim_ids(config: FatPointConfig) -> list[str]:
    return [cid for cid in all_claim_ids() if _CLAIMS[cid].applies(config)]


# -- drivers ----------------------------------------------------------------------


def run_claims(config: FatPointConfig,
               claim_ids: Optional[Sequence[str]] = None,
               window: Window = DEFAULT_WINDOW, *,
               cell_seconds: Optional[float] = DEFAULT_CELL_SECONDS,
               degree_cap: Optional[int] = None,
               pair_cap: Optional[int] = None,
               use_criteria: bool = True,
               jobs: int = 1) -> list[Verdict]:
    """Evaluate claims cell by cell over the window, sorted verdicts out.

    Each cell runs under its own budget; a cell that exhausts it is
    reported with ``holds=None`` and ``method="skipped"`` rather than
    aborting the sweep.  ``jobs`` > 1 runs cells on a thread pool; the
    sorted output is identical either way.
    """
    if claim_ids is None:
        ids = applicable_claim_ids(config)
    else:
        unknown = sorted(set(claim_ids) - set(_CLAIMS))
        if unknown:
            raise InvalidParams(f"unknown claim ids {unknown}; known: {all_claim_ids()}")
        ids = [cid for cid in sorted(set(claim_ids))
               if _CLAIMS[cid].applies(config)]
    caps = {}
    if degree_cap is not None:
        caps["degree_cap"] = degree_cap
    if pair_cap is not None:
        caps["pair_cap"] = pair_cap
    tasks = [
        (cid, params, runner)
        for cid in ids
        for params, runner in _CLAIMS[cid].cells(config, window)
    ]

    def run_cell(task) -> Verdict:
        cid, params, runner = task
        t0 = time.monotonic()
        budget = Budget(
            deadline=(t0 + cell_seconds) if cell_seconds else None, **caps
        )
        try:
            holds, witness, method, note = runner(budget, use_criteria)
        except ResourceLimit as exc:
            if exc.kind == "internal":
                raise
            return Verdict(cid, params, None, None, "skipped",
                           config.sampled, _ms(t0), f"resource limit: {exc}")
        return Verdict(cid, params, holds, witness, method,
                       config.sampled, _ms(t0), note)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            verdicts = list(pool.map(run_cell, tasks))
    else:
        verdicts = [run_cell(task) for task in tasks]
    verdicts.sort(key=Verdict.sort_key)
    return verdicts


def modular_screen(config: FatPointConfig,
                   claim_ids: Optional[Sequence[str]] = None,
                   window: Window = DEFAULT_WINDOW,
                   p: int = DEFAULT_SCREEN_PRIME,
                   **kwargs) -> list[Verdict]:
    """Run the claims over the configuration reduced mod p.

    The screen is a fast plausibility pass: a failure mod p strongly
    suggests a rational failure, but agreement proves nothing, so the
    verdicts are labelled and must never be merged with exact ones.
    """
    reduced = config.reduce_mod(p)
    verdicts = run_claims(reduced, claim_ids, window, **kwargs)
    for v in verdicts:
        v.params = {**v.params, "p": p}
        v.note = ("modular screen (heuristic)" + (f"; {v.note}" if v.note else ""))
    return verdicts


# -- cross checks -----------------------------------------------------------------

_IMPLICATION_RULES = (
    # rule name, antecedent id, antecedent filter, consequent id, param map
    ("C3.4=>C3.5", "C3.4", lambda p: True,
     "C3.5", lambda p: {"r": p["r"]}),
    ("C3.4=>C3.2", "C3.4", lambda p: True,
     "C3.2", lambda p: {"r": p["r"]}),
    ("C3.8=>C3.7", "C3.8", lambda p: True,
     "C3.7", lambda p: {"m": p["m"], "t": p["t"]}),
    ("C3.8=>C3.6", "C3.8", lambda p: True,
     "C3.6", lambda p: {"m": p["m"], "r": p["t"]}),
    ("C3.8=>C3.1", "C3.8", lambda p: p["m"] == 1,
     "C3.1", lambda p: {"r": p["t"]}),
    ("C3.9a=>C3.2", "C3.9a", lambda p: p["m"] == 1,
     "C3.2", lambda p: {"r": p["t"]}),
    ("C3.9b=>C3.4", "C3.9b", lambda p: p["m"] == 1,
     "C3.4", lambda p: {"r": p["t"]}),
    ("C3.9b=>C3.9a", "C3.9b", lambda p: True,
     "C3.9a", lambda p: {"m": p["m"], "t": p["t"]}),
    ("C3.1=>T2.2", "C3.1", lambda p: True,
     "T2.2", lambda p: {"m": 1, "t": p["r"]}),
)


def implication_checks(verdicts: Sequence[Verdict]) -> list[dict]:
    """Check the verdict set against the known implications between claims.

    A violation — an antecedent cell that holds while its consequent
    cell fails — means the machinery itself is inconsistent and is
    treated as a build-failing defect, not as mathematical output.
    """
    index: dict[tuple, Optional[bool]] = {}
    base: dict[str, dict] = {}
    for v in verdicts:
        index[(v.claim_id, _params_key(v.params))] = v.holds
        base.setdefault(v.claim_id, {k: v.params[k] for k in ("N", "n")
                                     if k in v.params})
    checks = []
    for rule, ante_id, accept, cons_id, mapper in _IMPLICATION_RULES:
        for v in verdicts:
            if v.claim_id != ante_id or v.holds is not True:
                continue
            if not accept(v.params):
                continue
            cons_params = {**base.get(cons_id, {}), **mapper(v.params)}
            key = (cons_id, _params_key(cons_params))
            if key not in index:
                continue
            cons_holds = index[key]
            if cons_holds is None:
                continue
            checks.append({
                "rule": rule,
                "antecedent": dict(v.params),
                "consequent": dict(cons_params),
                "ok": bool(cons_holds),
            })
    return checks


def cross_check_criteria(config: FatPointConfig,
                         claim_ids: Optional[Sequence[str]] = None,
                         window: Window = DEFAULT_WINDOW,
                         **kwargs) -> list[dict]:
    """Re-run criterion-certified cells directly and report any conflicts.

    Returns one record per containment cell decided by a criterion,
    with the direct result alongside; a record with ok=False is a
    soundness defect in the criteria.
    """
    with_criteria = run_claims(config, claim_ids, window, use_criteria=True,
                               **kwargs)
    direct = run_claims(config, claim_ids, window, use_criteria=False,
                        **kwargs)
    direct_index = {(v.claim_id, _params_key(v.params)): v for v in direct}
    records = []
    for v in with_criteria:
        if not v.method.startswith("criterion-"):
            continue
        twin = direct_index.get((v.claim_id, _params_key(v.params)))
        if twin is None or twin.holds is None:
            continue
        records.append({
            "claim_id": v.claim_id,
            "params": dict(v.params),
            "method": v.method,
            "ok": twin.holds is True,
        })
    return records
