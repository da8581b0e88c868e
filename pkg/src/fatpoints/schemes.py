"""Points in projective space, fat-point configurations, and the two
independent constructions of symbolic powers.

Route one intersects ordinary powers of the point ideals by elimination.
Route two assembles each graded slice from vanishing conditions: a form
vanishes to order >= m at a point iff, after the linear change of
coordinates moving the point to a coordinate vertex, every term has
degree >= m in the transverse variables.  Expanding that change of
coordinates binomially gives integer conditions (Hasse-derivative style),
valid in any characteristic.  The two routes are cross-checked in the
test suite; callers can use whichever fits.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import FieldMismatch, InvalidParams, LengthMismatch, ResourceLimit
from .field import GF, QQ, CoefficientField, PrimeField, RationalField
from .ideals import (
    Budget,
    Ideal,
    autoreduce_generators,
    ideal_intersect,
    ideal_power,
)
from .linalg import kernel_basis, kernel_dim_certified, kernel_reference
from .polyring import Polynomial, Ring, monomials_of_degree

COORD_RANGE = 10_000
MAX_REDRAWS = 8


# -- points and configurations -----------------------------------------------


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^N with canonical coordinates.

    Over Q the stored form is primitive-integer with a positive first
    nonzero entry; over GF(p) the first nonzero entry is scaled to 1.
    """

    field: CoefficientField
    coords: tuple

    def __post_init__(self):
        raw = [self.field.normalize(c) for c in self.coords]
        if all(c == self.field.zero for c in raw):
            raise InvalidParams("projective point needs a nonzero coordinate")
        if isinstance(self.field, PrimeField):
            pivot = next(i for i, c in enumerate(raw) if c != 0)
            inv = self.field.inv(raw[pivot])
            canon = tuple(c * inv % self.field.p for c in raw)
        else:
            den = 1
            for c in raw:
                den = den * c.denominator // math.gcd(den, c.denominator)
            ints = [int(c * den) for c in raw]
            g = 0
            for c in ints:
                g = math.gcd(g, c)
            pivot = next(i for i, c in enumerate(ints) if c != 0)
            if ints[pivot] < 0:
                g = -g
            canon = tuple(Fraction(c // g) for c in ints)
        object.__setattr__(self, "coords", canon)

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @property
    def pivot(self) -> int:
        return next(i for i, c in enumerate(self.coords) if c != 0)

    def int_coords(self) -> tuple[int, ...]:
        """Integer representatives of the canonical coordinates."""
        if isinstance(self.field, PrimeField):
            return tuple(int(c) for c in self.coords)
        return tuple(int(c) for c in self.coords)

    def __str__(self) -> str:
        return "[" + ":".join(str(c) for c in self.coords) + "]"


@dataclass(frozen=True)
class FatPointConfig:
    """A finite set of distinct points with positive multiplicities."""

    field: CoefficientField
    dim: int
    points: tuple[ProjectivePoint, ...]
    mults: tuple[int, ...]
    label: str = dc_field(default="", compare=False)
    sampled: bool = dc_field(default=False, compare=False)
    seed: Optional[int] = dc_field(default=None, compare=False)

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidParams("ambient dimension must be at least 1")
        if not self.points:
            raise InvalidParams("configuration needs at least one point")
        if len(self.points) != len(self.mults):
            raise LengthMismatch("one multiplicity per point")
        for p in self.points:
            if p.field != self.field:
                raise FieldMismatch("point field differs from configuration field")
            if p.dim != self.dim:
                raise InvalidParams(f"point {p} not in P^{self.dim}")
        if any(m < 1 for m in self.mults):
            raise InvalidParams("multiplicities must be positive")
        if len(set(self.points)) != len(self.points):
            raise InvalidParams("points must be distinct")

    @property
    def npoints(self) -> int:
        return len(self.points)

    def ring(self) -> Ring:
        return Ring(self.field, self.dim + 1)

    def scaled(self, scale: int) -> tuple[int, ...]:
        if scale < 1:
            raise InvalidParams("symbolic power index must be positive")
        return tuple(m * scale for m in self.mults)

    def reduce_mod(self, p: int) -> "FatPointConfig":
        """The same configuration over GF(p); raises InvalidParams when
        points collide or degenerate after reduction."""
        if not isinstance(self.field, RationalField):
            raise InvalidParams("only rational configurations reduce mod p")
        fp = GF(p)
        pts = []
        for pt in self.points:
            ints = pt.int_coords()
            if all(c % p == 0 for c in ints):
                raise InvalidParams(f"point {pt} degenerates mod {p}")
            pts.append(ProjectivePoint(fp, tuple(c % p for c in ints)))
        if len(set(pts)) != len(pts):
            raise InvalidParams(f"points collide mod {p}")
        return FatPointConfig(
            fp, self.dim, tuple(pts), self.mults,
            label=f"{self.label}@mod{p}" if self.label else f"mod{p}",
            sampled=self.sampled, seed=self.seed,
        )

    def __str__(self) -> str:
        name = self.label or "config"
        return f"{name}({self.npoints} points in P^{self.dim} over {self.field})"


# -- ideals of points ---------------------------------------------------------


def point_ideal(ring: Ring, point: ProjectivePoint) -> Ideal:
    """The prime ideal of a point: dim-many independent linear forms."""
    if point.field != ring.field:
        raise FieldMismatch("point and ring over different fields")
    if point.dim + 1 != ring.nvars:
        raise InvalidParams("point dimension does not match ring")
    piv = point.pivot
    coords = point.coords
    gens = []
    for j in range(ring.nvars):
        if j == piv:
            continue
        # coords[piv] * x_j - coords[j] * x_piv vanishes at the point
        f = ring.var(j) * coords[piv] - ring.var(piv) * coords[j]
        gens.append(f)
    return Ideal(ring, gens)


def irrelevant_ideal(ring: Ring) -> Ideal:
    """The ideal generated by all the variables."""
    return Ideal(ring, list(ring.gens))


_FAT_CACHE: dict = {}


def fat_ideal(config: FatPointConfig, scale: int = 1,
              budget: Optional[Budget] = None) -> Ideal:
    """Intersection of the scaled powers of the point ideals."""
    key = (config, scale)
    cached = _FAT_CACHE.get(key)
    if cached is not None:
        return cached
    ring = config.ring()
    mults = config.scaled(scale)
    result: Optional[Ideal] = None
    for pt, m in zip(config.points, mults):
        piece = ideal_power(point_ideal(ring, pt), m, budget)
        result = piece if result is None else ideal_intersect(result, piece, budget)
    _FAT_CACHE[key] = result
    return result


# -- vanishing conditions and graded slices -----------------------------------


def _transverse_monomials(nslots: int, degree: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def rec(prefix: list[int], remaining: int, slot: int):
        if slot == nslots - 1:
            out.append(tuple(prefix + [remaining]))
            return
        for e in range(remaining, -1, -1):
            rec(prefix + [e], remaining - e, slot + 1)

    if nslots == 0:
        return [()] if degree == 0 else []
    rec([], degree, 0)
    return out


def vanishing_condition_rows(point: ProjectivePoint, mult: int, t: int,
                             columns: Sequence[tuple[int, ...]]) -> list[list[int]]:
    """Linear conditions on degree-t coefficient vectors forcing vanishing
    to order >= mult at the point.  Integer entries; reduce mod p as needed.
    """
    nvars = point.dim + 1
    piv = point.pivot
    others = [j for j in range(nvars) if j != piv]
    coords = point.int_coords()
    # powers[j][d] = coords[j] ** d; the pivot exponent reaches t + mult - 1
    top = t + mult
    powers = [[1] * (top + 1) for _ in range(nvars)]
    for j in range(nvars):
        for d in range(1, top + 1):
            powers[j][d] = powers[j][d - 1] * coords[j]
    rows: list[list[int]] = []
    for k in range(mult):
        for tau in _transverse_monomials(len(others), k):
            row = []
            for e in columns:
                entry = powers[piv][e[piv] + k]
                for j, tj in zip(others, tau):
                    if tj > e[j]:
                        entry = 0
                        break
                    entry *= math.comb(e[j], tj) * powers[j][e[j] - tj]
                row.append(entry)
            rows.append(row)
    return rows


_SLICE_CACHE: dict = {}


def _slice_rows(config: FatPointConfig, scale: int,
                t: int) -> tuple[list, list[list[int]]]:
    columns = monomials_of_degree(config.ring(), t)
    rows: list[list[int]] = []
    for pt, m in zip(config.points, config.scaled(scale)):
        rows.extend(vanishing_condition_rows(pt, m, t, columns))
    return columns, rows


def slice_basis(config: FatPointConfig, scale: int, t: int,
                budget: Optional[Budget] = None) -> tuple[Polynomial, ...]:
    """Basis of the degree-t graded piece of the scaled symbolic power."""
    key = (config, scale, t)
    cached = _SLICE_CACHE.get(key)
    if cached is not None:
        return cached
    ring = config.ring()
    if t < 0:
        result: tuple[Polynomial, ...] = ()
        _SLICE_CACHE[key] = result
        return result
    columns, rows = _slice_rows(config, scale, t)
    vectors = kernel_basis(config.field, rows, len(columns), budget)
    polys = []
    for vec in vectors:
        coeffs = {e: c for e, c in zip(columns, vec) if c != 0}
        poly = Polynomial(ring, coeffs)
        if isinstance(config.field, RationalField):
            den = 1
            vals = poly.coefficients_raw()
            for c in vals.values():
                den = den * c.denominator // math.gcd(den, c.denominator)
            ints = {e: c * den for e, c in vals.items()}
            g = 0
            for c in ints.values():
                g = math.gcd(g, int(c))
            lead = max(ints, key=ring.sort_key)
            if ints[lead] < 0:
                g = -g
            poly = Polynomial(ring, {e: c / g for e, c in ints.items()})
        polys.append(poly)
    result = tuple(polys)
    _SLICE_CACHE[key] = result
    return result


_SLICE_DIM_CACHE: dict = {}


def slice_dim(config: FatPointConfig, scale: int, t: int) -> int:
    """Dimension of the degree-t graded piece of the scaled symbolic power.

    Over Q this first tries a modular rank certificate, which avoids
    reconstructing an exact basis when the vanishing conditions are
    independent; otherwise it falls back to the exact basis.
    """
    key = (config, scale, t)
    hit = _SLICE_CACHE.get(key)
    if hit is not None:
        return len(hit)
    cached = _SLICE_DIM_CACHE.get(key)
    if cached is not None:
        return cached
    if t >= 0 and isinstance(config.field, RationalField):
        columns, rows = _slice_rows(config, scale, t)
        dim = kernel_dim_certified(rows, len(columns))
        if dim is not None:
            _SLICE_DIM_CACHE[key] = dim
            return dim
    dim = len(slice_basis(config, scale, t))
    _SLICE_DIM_CACHE[key] = dim
    return dim


def expected_slice_codim(config: FatPointConfig, scale: int) -> int:
    """Sum of the conditions imposed by each fat point, counted blindly."""
    N = config.dim
    return sum(math.comb(m + N - 1, N) for m in config.scaled(scale))


def symbolic_socle_degree(config: FatPointConfig, scale: int,
                          budget: Optional[Budget] = None) -> int:
    """Least t at which the slice dimension agrees with the count
    predicted by the multiplicities, with agreement again at t + 1."""
    budget = budget or Budget()
    N = config.dim
    deg = expected_slice_codim(config, scale)
    t = 0
    hits = 0
    while True:
        expected = math.comb(t + N, N) - deg
        if slice_dim(config, scale, t) == max(expected, 0) and expected >= 0:
            hits += 1
            if hits == 2:
                return t - 1
        else:
            hits = 0
        t += 1
        if t > budget.degree_cap:
            raise ResourceLimit(
                f"no stable slice count below degree {budget.degree_cap}",
                kind="degree",
            )


_SYMBOLIC_CACHE: dict = {}


def symbolic_ideal_from_slices(config: FatPointConfig, scale: int = 1,
                               budget: Optional[Budget] = None) -> Ideal:
    """The scaled symbolic power, generated by its graded slices up to one
    past the degree where the slice count stabilises."""
    key = (config, scale)
    cached = _SYMBOLIC_CACHE.get(key)
    if cached is not None:
        return cached
    ring = config.ring()
    tau = symbolic_socle_degree(config, scale, budget)
    sigma = tau + 1
    gens: list[Polynomial] = []
    for t in range(0, sigma + 1):
        gens.extend(slice_basis(config, scale, t, budget))
    result = Ideal(ring, autoreduce_generators(ring, gens, budget))
    _SYMBOLIC_CACHE[key] = result
    return result


# -- cone decomposition over a hyperplane --------------------------------------


def hyperplane_slice_config(config: FatPointConfig) -> FatPointConfig:
    """The same points seen inside the hyperplane x0 = 0 (coordinate dropped)."""
    if any(pt.coords[0] != pt.field.zero for pt in config.points):
        raise InvalidParams("configuration does not lie in the hyperplane x0 = 0")
    if config.dim < 2:
        raise InvalidParams("no room to drop a coordinate")
    pts = tuple(
        ProjectivePoint(config.field, pt.coords[1:]) for pt in config.points
    )
    return FatPointConfig(
        config.field, config.dim - 1, pts, config.mults,
        label=f"{config.label}|x0=0" if config.label else "hyperplane-slice",
    )


def hyperplane_decomposition_sides(config: FatPointConfig, m: int,
                                   budget: Optional[Budget] = None
                                   ) -> tuple[Ideal, Ideal]:
    """Both sides of the cone decomposition of the symbolic power.

    Returns (candidate, direct): the sum of x0^(m-j) times the lifted
    symbolic powers of the hyperplane slice, and the symbolic power of
    the configuration itself built by intersecting point-ideal powers.
    """
    small = hyperplane_slice_config(config)
    big_ring = config.ring()
    lift = [j + 1 for j in range(small.dim + 1)]
    x0 = big_ring.var(0)
    gens: list[Polynomial] = [x0 ** m]
    for j in range(1, m + 1):
        piece = symbolic_ideal_from_slices(small, j, budget)
        factor = x0 ** (m - j)
        for g in piece.generators:
            gens.append(factor * g.map_variables(big_ring, lift))
    candidate = Ideal(big_ring, autoreduce_generators(big_ring, gens, budget))
    return candidate, fat_ideal(config, m, budget)


def hyperplane_decomposition_check(config: FatPointConfig, m: int,
                                   budget: Optional[Budget] = None) -> bool:
    """Whether the symbolic power decomposes as sum_j x0^(m-j) * (lifted
    symbolic powers of the slice), as it must for points inside x0 = 0."""
    candidate, direct = hyperplane_decomposition_sides(config, m, budget)
    return candidate == direct


# -- named configurations -------------------------------------------------------


def _solve_point(field: CoefficientField, rows: list[list], ncols: int) -> ProjectivePoint:
    basis = kernel_reference(field, rows, ncols)
    if len(basis) != 1:
        raise InvalidParams("hyperplanes do not meet in a single point")
    return ProjectivePoint(field, tuple(basis[0]))


def star_config(s: int, dim: int = 2, field: CoefficientField = QQ) -> FatPointConfig:
    """Pairwise (dim-wise) intersections of s hyperplanes in general position.

    The hyperplanes are the dim+1 coordinate hyperplanes followed by
    hyperplanes with coefficient vectors (1, t, t^2, ...) for t = 1, 2, ...
    General position (no dim+1 concurrent) is verified explicitly.
    """
    if s < dim + 1:
        raise InvalidParams("need at least dim+1 hyperplanes for a star")
    n = dim + 1
    hyperplanes: list[list] = []
    for i in range(n):
        coeffs = [field.zero] * n
        coeffs[i] = field.one
        hyperplanes.append(coeffs)
    for t in range(1, s - n + 1):
        hyperplanes.append([field.normalize(t ** j) for j in range(n)])
    from itertools import combinations

    for subset in combinations(range(s), n):
        rows = [hyperplanes[i] for i in subset]
        if kernel_reference(field, rows, n):
            raise InvalidParams(
                f"hyperplanes {subset} are concurrent; star degenerates"
            )
    points = []
    for subset in combinations(range(s), dim):
        rows = [hyperplanes[i] for i in subset]
        points.append(_solve_point(field, rows, n))
    if len(set(points)) != len(points):
        raise InvalidParams("star points collide; hyperplanes too special")
    return FatPointConfig(
        field, dim, tuple(points), (1,) * len(points), label=f"star({s},{dim})"
    )


def conic_config(n: int, field: CoefficientField = QQ) -> FatPointConfig:
    """n points [1 : t : t^2] on the smooth conic x0*x2 = x1^2."""
    if n < 1:
        raise InvalidParams("need at least one point")
    ts: list[int] = [0]
    v = 1
    while len(ts) < n:
        ts.append(v)
        if len(ts) < n:
            ts.append(-v)
        v += 1
    pts = tuple(
        ProjectivePoint(field, (field.one, field.normalize(t), field.normalize(t * t)))
        for t in ts[:n]
    )
    if len(set(pts)) != len(pts):
        raise InvalidParams(f"conic parameters collide over {field}")
    return FatPointConfig(field, 2, pts, (1,) * n, label=f"conic({n})")


def grid_ci_config(field: CoefficientField = QQ) -> FatPointConfig:
    """The 2x2 grid cut out by x0*(x0-x2) and x1*(x1-x2)."""
    coords = [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
    pts = tuple(ProjectivePoint(field, c) for c in coords)
    return FatPointConfig(field, 2, pts, (1, 1, 1, 1), label="grid_ci")


def collinear_config(n: int, field: CoefficientField = QQ) -> FatPointConfig:
    """n points on the line x0 = 0 inside P^2."""
    if n < 2:
        raise InvalidParams("need at least two collinear points")
    small = [(0, 1), (1, 0), (1, 1)]
    k = 2
    while len(small) < n:
        small.append((1, k))
        k += 1
    pts = tuple(
        ProjectivePoint(field, (field.zero,) + tuple(field.normalize(c) for c in sm))
        for sm in small[:n]
    )
    if len(set(pts)) != len(pts):
        raise InvalidParams(f"collinear parameters collide over {field}")
    return FatPointConfig(field, 2, pts, (1,) * n, label=f"collinear({n})")


def f3_twelve_config() -> FatPointConfig:
    """All points of P^2 over GF(3) except [0:0:1]."""
    field = GF(3)
    pts = []
    for b in range(3):
        pts.append(ProjectivePoint(field, (0, 1, b)))
    for a in range(3):
        for b in range(3):
            pts.append(ProjectivePoint(field, (1, a, b)))
    return FatPointConfig(field, 2, tuple(pts), (1,) * 12, label="f3_twelve")


def f3_twelve_line_product(ring: Ring) -> Polynomial:
    """Product of the nine lines a*x0 + b*x1 + x2 over GF(3)."""
    if ring.field != GF(3) or ring.nvars != 3:
        raise InvalidParams("the line product lives in three variables over GF(3)")
    f = ring.one()
    for a in range(3):
        for b in range(3):
            f = f * (ring.var(0) * a + ring.var(1) * b + ring.var(2))
    return f


# -- deterministic sampling -----------------------------------------------------


_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Tiny deterministic PRNG (splitmix64), stable across platforms."""

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_uint64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        span = hi - lo + 1
        return lo + self.next_uint64() % span


def generic_config(n: int, seed: int, dim: int = 2,
                   coord_range: int = COORD_RANGE) -> FatPointConfig:
    """n points with pseudo-random integer coordinates, certified to impose
    independent conditions in each low degree; redraws on failure."""
    if n < 1:
        raise InvalidParams("need at least one point")
    rng = SplitMix64(seed)
    N = dim
    t_star = 0
    while math.comb(t_star + N, N) <= n:
        t_star += 1
    for _ in range(MAX_REDRAWS):
        pts: list[ProjectivePoint] = []
        while len(pts) < n:
            coords = tuple(
                rng.randint(-coord_range, coord_range) for _ in range(N + 1)
            )
            if all(c == 0 for c in coords):
                continue
            pt = ProjectivePoint(QQ, coords)
            if pt in pts:
                continue
            pts.append(pt)
        config = FatPointConfig(
            QQ, dim, tuple(pts), (1,) * n,
            label=f"generic({n},seed={seed})", sampled=True, seed=seed,
        )
        ok = True
        for t in range(1, t_star + 2):
            expected = max(math.comb(t + N, N) - n, 0)
            if slice_dim(config, 1, t) != expected:
                ok = False
                break
        if ok:
            return config
    raise ResourceLimit(
        f"no generic draw of {n} points passed certification "
        f"after {MAX_REDRAWS} attempts",
        kind="sampling",
    )


# -- registry and serialisation ---------------------------------------------------


def named_config(name: str, **params) -> FatPointConfig:
    """Resolve a configuration by name.

    Known names: star(s, N), conic(n), grid_ci, collinear(n),
    f3_twelve, generic(n, seed, N).
    """
    def _dim(default: int = 2) -> int:
        return int(params.get("N", params.get("dim", default)))

    builders = {
        "star": lambda: star_config(int(params.get("s", 4)), _dim()),
        "conic": lambda: conic_config(int(params["n"])),
        "grid_ci": lambda: grid_ci_config(),
        "collinear": lambda: collinear_config(int(params["n"])),
        "f3_twelve": lambda: f3_twelve_config(),
        "generic": lambda: generic_config(
            int(params["n"]), int(params.get("seed", 0)), _dim()
        ),
    }
    if name not in builders:
        raise InvalidParams(
            f"unknown configuration {name!r}; known: {sorted(builders)}"
        )
    return builders[name]()


def _field_to_json(field: CoefficientField) -> dict:
    if isinstance(field, PrimeField):
        return {"type": "Fp", "p": field.p}
    return {"type": "Q"}


def _field_from_json(data: dict) -> CoefficientField:
    if data.get("type") == "Fp":
        return GF(int(data["p"]))
    if data.get("type") == "Q":
        return QQ
    raise InvalidParams(f"unknown field description {data!r}")


def config_to_json(config: FatPointConfig) -> dict:
    return {
        "field": _field_to_json(config.field),
        "N": config.dim,
        "points": [
            {"coords": [str(c) for c in pt.coords], "mult": m}
            for pt, m in zip(config.points, config.mults)
        ],
        "label": config.label,
        "sampled": config.sampled,
        "seed": config.seed,
    }


def config_from_json(data: dict) -> FatPointConfig:
    if "named" in data:
        return named_config(data["named"], **data.get("params", {}))
    if "N" not in data and "dim" not in data:
        raise InvalidParams("configuration JSON must carry the dimension key 'N'")
    field = _field_from_json(data["field"])
    pts = []
    mults = []
    for entry in data["points"]:
        coords = tuple(field.from_string(str(c)) for c in entry["coords"])
        pts.append(ProjectivePoint(field, coords))
        mults.append(int(entry.get("mult", 1)))
    return FatPointConfig(
        field, int(data.get("N", data.get("dim"))), tuple(pts), tuple(mults),
        label=data.get("label", ""), sampled=bool(data.get("sampled", False)),
        seed=data.get("seed"),
    )


def load_config(path: str) -> FatPointConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_json(json.load(fh))
