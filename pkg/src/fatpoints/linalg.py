"""Exact kernels of integer and prime-field matrices.

Over GF(p) a single modular elimination suffices (p < 2**31, so products
of residues fit in int64).  Over Q the kernel is found modulo a
deterministic sequence of 30-bit primes, recombined by CRT and rational
reconstruction, then certified by an exact integer matrix-vector check.
The certificate is unconditional: a prime with bad reduction changes the
observed rank or fails verification and is discarded, never trusted.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ResourceLimit
from .field import PrimeField, RationalField

# Deterministic 30-bit structure primes, generated downward from 2**30.
_PRIME_FLOOR = 2**30


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_stream():
    n = _PRIME_FLOOR - 1
    while n > 2:
        if _is_prime(n):
            yield n
        n -= 2


def _rref_mod(matrix: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form mod p; returns (rref, pivot columns)."""
    a = np.array(matrix % p, dtype=np.int64)
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        rows = np.nonzero(a[:, c])[0]
        rows = rows[rows != r]
        if rows.size:
            a[rows] = (a[rows] - np.outer(a[rows, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _kernel_from_rref(rref: np.ndarray, pivots: list[int], ncols: int, p: int) -> list[list[int]]:
    """Echelonized kernel basis mod p, one vector per free column."""
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, c in enumerate(pivots):
            coeff = int(rref[row, f])
            if coeff:
                v[c] = (-coeff) % p
        basis.append(v)
    return basis


def kernel_mod_p(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Kernel basis of a matrix over GF(p)."""
    if not rows:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    a = np.array([[int(x) % p for x in row] for row in rows], dtype=np.int64)
    rref, pivots = _rref_mod(a, p)
    return _kernel_from_rref(rref, pivots, ncols, p)


def kernel_dim_certified(rows: Sequence[Sequence[int]], ncols: int, tries: int = 5) -> int | None:
    """Exact rational kernel dimension, certified from modular ranks alone.

    For any prime p the rank mod p is at most the rank over Q, so the
    kernel dimension mod p is an upper bound on the rational kernel
    dimension, while max(ncols - nrows, 0) is a lower bound.  When the
    two meet, the dimension is pinned exactly without reconstructing a
    basis.  Returns None when no tried prime closes the gap (dependent
    rows); callers then fall back to an exact kernel computation.
    """
    if not rows:
        return ncols
    floor = max(ncols - len(rows), 0)
    int_rows = [[int(x) for x in row] for row in rows]
    stream = _prime_stream()
    best = ncols
    for _ in range(tries):
        p = next(stream)
        a = np.array([[x % p for x in row] for row in int_rows], dtype=np.int64)
        _, pivots = _rref_mod(a, p)
        best = min(best, ncols - len(pivots))
        if best == floor:
            return floor
    return None


def _crt_combine(x: int, m: int, r: int, p: int) -> int:
    """Combine x mod m with r mod p into a residue mod m*p."""
    diff = (r - x) % p
    inv = pow(m % p, p - 2, p)
    return x + m * (diff * inv % p)


def _rational_reconstruct(residue: int, modulus: int) -> Fraction | None:
    """Smallest fraction n/d with n ≡ residue*d (mod modulus), if any."""
    bound = math.isqrt(modulus // 2)
    a0, a1 = modulus, residue % modulus
    t0, t1 = 0, 1
    while a1 > bound:
        q = a0 // a1
        a0, a1 = a1, a0 - q * a1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    if math.gcd(a1, abs(t1)) != 1:
        return None
    return Fraction(a1, t1)


def _integerize_rows(rows: Sequence[Sequence[Fraction | int]]) -> list[list[int]]:
    out = []
    for row in rows:
        lcm = 1
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        scaled = []
        for x in row:
            if isinstance(x, Fraction):
                scaled.append(int(x * lcm))
            else:
                scaled.append(int(x) * lcm)
        g = 0
        for x in scaled:
            g = math.gcd(g, x)
        if g > 1:
            scaled = [x // g for x in scaled]
        out.append(scaled)
    return out


def _verify_kernel(int_rows: list[list[int]], vector: list[Fraction]) -> bool:
    lcm = 1
    for x in vector:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in vector]
    for row in int_rows:
        if sum(r * v for r, v in zip(row, ints) if v) != 0:
            return False
    return True


def _attempt_reconstruction(samples, nker, ncols, int_rows) -> list[list[Fraction]] | None:
    vectors: list[list[Fraction]] = []
    for k in range(nker):
        entries: list[Fraction] = []
        for c in range(ncols):
            x, m = 0, 1
            for p_i, kern in samples:
                x = _crt_combine(x, m, kern[k][c], p_i)
                m *= p_i
            rec = _rational_reconstruct(x, m)
            if rec is None:
                return None
            entries.append(rec)
        if not _verify_kernel(int_rows, entries):
            return None
        vectors.append(entries)
    return vectors


def kernel_rational(rows: Sequence[Sequence[Fraction | int]], ncols: int,
                    max_primes: int = 65536,
                    budget=None) -> list[list[Fraction]]:
    """Certified kernel basis of a rational matrix.

    Structure (rank and pivot columns) is taken from the best class seen
    within an epoch of primes: maximal rank, then lexicographically least
    pivots.  Every returned vector is checked to satisfy rows @ v == 0
    exactly, so a prime with bad reduction can cost time but never
    correctness; epochs restart with fresh primes to guarantee progress.
    """
    if not rows:
        return [[Fraction(i == j) for i in range(ncols)] for j in range(ncols)]
    int_rows = _integerize_rows(rows)
    stream = _prime_stream()
    epoch_limit = 32
    used = 0
    while used < max_primes:
        groups: dict[tuple[int, tuple[int, ...]], list[tuple[int, list[list[int]]]]] = {}
        in_epoch = 0
        while in_epoch < epoch_limit and used < max_primes:
            if budget is not None:
                budget.check_time()
            p = next(stream)
            used += 1
            in_epoch += 1
            a = np.array([[x % p for x in row] for row in int_rows], dtype=np.int64)
            rref, pivots = _rref_mod(a, p)
            key = (-len(pivots), tuple(pivots))
            groups.setdefault(key, []).append(
                (p, _kernel_from_rref(rref, pivots, ncols, p))
            )
            best = min(groups)
            samples = groups[best]
            n = len(samples)
            # reconstruction attempts on a doubling schedule
            if n & (n - 1) != 0 and in_epoch < epoch_limit:
                continue
            nker = ncols + best[0]
            if nker == 0:
                return []
            result = _attempt_reconstruction(samples, nker, ncols, int_rows)
            if result is not None:
                return result
        epoch_limit *= 2
    raise ResourceLimit("rational kernel did not stabilize within the prime budget")


def kernel_basis(field, rows: Sequence[Sequence], ncols: int,
                 budget=None) -> list[list]:
    """Kernel basis over the coefficient field; raw field values."""
    if isinstance(field, PrimeField):
        return kernel_mod_p(rows, ncols, field.p)
    if isinstance(field, RationalField):
        return kernel_rational(rows, ncols, budget=budget)
    raise TypeError(f"unsupported field {field!r}")


def kernel_reference(field, rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Plain Gaussian elimination over the field; test oracle."""
    mat = [[field.normalize(x) for x in row] for row in rows]
    nrows = len(mat)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pr = next((i for i in range(r, nrows) if not field.is_zero(mat[i][c])), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = field.inv(mat[r][c])
        mat[r] = [field.mul(x, inv) for x in mat[r]]
        for i in range(nrows):
            if i != r and not field.is_zero(mat[i][c]):
                f = mat[i][c]
                mat[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    pivot_set = set(pivots)
    basis = []
    for f in [c for c in range(ncols) if c not in pivot_set]:
        v = [field.zero] * ncols
        v[f] = field.one
        for row, c in enumerate(pivots):
            if not field.is_zero(mat[row][f]):
                v[c] = field.neg(mat[row][f])
        basis.append(v)
    return basis
