"""Tests for point configurations, their ideals, and the two symbolic routes."""

import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fatpoints.errors import FieldMismatch, InvalidParams
from fatpoints.field import GF, QQ
from fatpoints.ideals import Ideal, ideal_contains, ideal_power
from fatpoints.polyring import Ring
from fatpoints.schemes import (
    FatPointConfig,
    ProjectivePoint,
    collinear_config,
    config_from_json,
    config_to_json,
    conic_config,
    expected_slice_codim,
    f3_twelve_config,
    f3_twelve_line_product,
    fat_ideal,
    generic_config,
    grid_ci_config,
    hyperplane_decomposition_check,
    hyperplane_slice_config,
    irrelevant_ideal,
    load_config,
    named_config,
    point_ideal,
    slice_basis,
    slice_dim,
    star_config,
    symbolic_ideal_from_slices,
)


def evaluate(poly, coords):
    """Evaluate a polynomial at a coordinate tuple, in the coefficient field."""
    field = poly.ring.field
    total = field.zero
    for exps, c in poly.coefficients_raw().items():
        term = c
        for e, v in zip(exps, coords):
            term = field.mul(term, field.normalize(v**e)) if e else term
        total = field.add(total, term)
    return total


# -- projective points ---------------------------------------------------------


class TestProjectivePoint:
    def test_rational_coordinates_become_primitive_integers(self):
        pt = ProjectivePoint(QQ, (Fraction(1, 2), Fraction(1, 3), 0))
        assert pt.coords == (Fraction(3), Fraction(2), Fraction(0))

    def test_first_nonzero_coordinate_is_positive(self):
        pt = ProjectivePoint(QQ, (0, -2, 4))
        assert pt.coords == (Fraction(0), Fraction(1), Fraction(-2))

    def test_scalar_multiples_are_equal(self):
        assert ProjectivePoint(QQ, (1, 2, 3)) == ProjectivePoint(QQ, (2, 4, 6))
        assert ProjectivePoint(QQ, (1, 2, 3)) != ProjectivePoint(QQ, (1, 2, 4))

    def test_prime_field_pivot_scaled_to_one(self):
        pt = ProjectivePoint(GF(7), (3, 5, 1))
        assert pt.coords[0] == 1
        # scaled by 3^{-1} = 5 mod 7
        assert pt.coords == (1, 4, 5)

    def test_zero_point_rejected(self):
        with pytest.raises(InvalidParams):
            ProjectivePoint(QQ, (0, 0, 0))

    def test_dim_and_pivot(self):
        pt = ProjectivePoint(QQ, (0, 0, 5, 1))
        assert pt.dim == 3
        assert pt.pivot == 2

    def test_int_coords(self):
        pt = ProjectivePoint(QQ, (Fraction(1, 2), 1))
        assert pt.int_coords() == (1, 2)


# -- point ideals ---------------------------------------------------------------


class TestPointIdeal:
    def test_coordinate_point_has_monomial_ideal(self):
        ring = Ring(QQ, 3)
        I = point_ideal(ring, ProjectivePoint(QQ, (1, 0, 0)))
        x0, x1, x2 = ring.gens
        assert set(I.groebner()) == {x1, x2}

    def test_generators_vanish_at_the_point(self):
        ring = Ring(QQ, 3)
        pt = ProjectivePoint(QQ, (2, -1, 3))
        I = point_ideal(ring, pt)
        assert len(I.generators) == 2
        for g in I.generators:
            assert evaluate(g, pt.coords) == QQ.zero

    def test_generators_independent_linear_forms(self):
        ring = Ring(QQ, 4)
        pt = ProjectivePoint(QQ, (1, 2, 3, 4))
        I = point_ideal(ring, pt)
        assert len(I.groebner()) == 3
        assert all(g.degree == 1 for g in I.groebner())

    def test_field_mismatch(self):
        ring = Ring(GF(5), 3)
        with pytest.raises(FieldMismatch):
            point_ideal(ring, ProjectivePoint(QQ, (1, 0, 0)))

    def test_dimension_mismatch(self):
        ring = Ring(QQ, 3)
        with pytest.raises(InvalidParams):
            point_ideal(ring, ProjectivePoint(QQ, (1, 0, 0, 0)))

    def test_irrelevant_ideal(self):
        ring = Ring(QQ, 3)
        assert set(irrelevant_ideal(ring).groebner()) == set(ring.gens)


# -- configurations ------------------------------------------------------------


class TestFatPointConfig:
    def test_validation(self):
        p = ProjectivePoint(QQ, (1, 0, 0))
        q = ProjectivePoint(QQ, (0, 1, 0))
        with pytest.raises(InvalidParams):
            FatPointConfig(QQ, 2, (p, p), (1, 1))  # duplicate points
        with pytest.raises(InvalidParams):
            FatPointConfig(QQ, 2, (p, q), (1, 0))  # zero multiplicity
        with pytest.raises(Exception):
            FatPointConfig(QQ, 2, (p, q), (1,))  # length mismatch

    def test_scaled(self):
        cfg = FatPointConfig(
            QQ, 2,
            (ProjectivePoint(QQ, (1, 0, 0)), ProjectivePoint(QQ, (0, 1, 0))),
            (1, 2),
        )
        assert cfg.scaled(3) == (3, 6)
        with pytest.raises(InvalidParams):
            cfg.scaled(0)

    def test_reduce_mod(self):
        cfg = collinear_config(3)
        red = cfg.reduce_mod(5)
        assert red.field == GF(5)
        assert red.npoints == 3
        assert red.mults == cfg.mults

    def test_reduce_mod_collision_rejected(self):
        # conic parameters 0, 1, -1, 2 give [1:0:0] and [1:2:4] = [1:0:0] mod 2
        cfg = conic_config(4)
        with pytest.raises(InvalidParams):
            cfg.reduce_mod(2)

    def test_reduce_mod_only_from_rationals(self):
        with pytest.raises(InvalidParams):
            f3_twelve_config().reduce_mod(5)


# -- named configurations --------------------------------------------------------


class TestNamedConfigs:
    def test_star_counts_and_label(self):
        cfg = star_config(4, 2)
        assert cfg.npoints == math.comb(4, 2) == 6
        assert cfg.mults == (1,) * 6
        assert cfg.label == "star(4,2)"
        assert cfg.dim == 2

    def test_star_points_are_pairwise_line_intersections(self):
        # every point lies on exactly two of the four lines
        cfg = star_config(4, 2)
        lines = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
        for pt in cfg.points:
            on = sum(
                1 for ln in lines
                if sum(Fraction(a) * c for a, c in zip(ln, pt.coords)) == 0
            )
            assert on == 2

    def test_star_needs_enough_hyperplanes(self):
        with pytest.raises(InvalidParams):
            star_config(2, 2)

    def test_conic_points_lie_on_conic(self):
        cfg = conic_config(6)
        assert cfg.npoints == 6
        assert cfg.label == "conic(6)"
        for pt in cfg.points:
            a, b, c = pt.coords
            assert a * c == b * b

    def test_grid(self):
        cfg = grid_ci_config()
        assert cfg.npoints == 4
        assert cfg.label == "grid_ci"
        ring = cfg.ring()
        f = ring.parse("x0^2 - x0*x2")
        g = ring.parse("x1^2 - x1*x2")
        for pt in cfg.points:
            assert evaluate(f, pt.coords) == QQ.zero
            assert evaluate(g, pt.coords) == QQ.zero

    def test_grid_ideal_is_the_complete_intersection(self):
        cfg = grid_ci_config()
        ring = cfg.ring()
        ci = Ideal(ring, [ring.parse("x0^2 - x0*x2"), ring.parse("x1^2 - x1*x2")])
        assert fat_ideal(cfg, 1) == ci

    def test_collinear_points_on_x0(self):
        cfg = collinear_config(4)
        assert cfg.npoints == 4
        assert all(pt.coords[0] == 0 for pt in cfg.points)

    def test_f3_twelve(self):
        cfg = f3_twelve_config()
        assert cfg.field == GF(3)
        assert cfg.npoints == 12
        missing = ProjectivePoint(GF(3), (0, 0, 1))
        assert missing not in cfg.points
        # 12 points + the missing one = all 13 points of the plane over GF(3)
        assert len(set(cfg.points) | {missing}) == 13

    def test_f3_line_product_vanishes_on_all_points(self):
        cfg = f3_twelve_config()
        ring = cfg.ring()
        f = f3_twelve_line_product(ring)
        assert f.degree == 9
        for pt in cfg.points:
            assert evaluate(f, pt.coords) == 0

    def test_generic_is_sampled_and_reproducible(self):
        cfg = generic_config(5, seed=7)
        again = generic_config(5, seed=7)
        assert cfg.sampled and cfg.seed == 7
        assert cfg.points == again.points
        other = generic_config(5, seed=8)
        assert cfg.points != other.points

    def test_generic_points_impose_independent_conditions(self):
        cfg = generic_config(9, seed=1)
        for t in range(1, 5):
            assert slice_dim(cfg, 1, t) == max(math.comb(t + 2, 2) - 9, 0)

    def test_named_config_dispatch(self):
        assert named_config("star", s=4).label == "star(4,2)"
        assert named_config("conic", n=5).npoints == 5
        assert named_config("grid_ci").npoints == 4
        assert named_config("collinear", n=3).npoints == 3
        assert named_config("f3_twelve").field == GF(3)
        g = named_config("generic", n=4, seed=3)
        assert g.sampled and g.npoints == 4
        with pytest.raises(InvalidParams):
            named_config("moebius")


# -- graded slices ---------------------------------------------------------------


class TestSlices:
    def test_single_point_slice_dimensions(self):
        # one point of multiplicity m imposes C(m+1, 2) conditions in degree >= m-1
        pt = ProjectivePoint(QQ, (1, 2, 3))
        cfg = FatPointConfig(QQ, 2, (pt,), (1,))
        for m in (1, 2, 3):
            for t in range(m - 1, m + 3):
                expected = math.comb(t + 2, 2) - math.comb(m + 1, 2)
                assert slice_dim(cfg, m, t) == expected

    def test_slice_elements_vanish_to_order(self):
        cfg = grid_ci_config()
        ring = cfg.ring()
        sq = [point_ideal(ring, pt) ** 2 for pt in cfg.points]
        for f in slice_basis(cfg, 2, 4):
            assert f.degree == 4
            for I in sq:
                assert I.contains_poly(f)

    def test_expected_codim(self):
        cfg = star_config(4, 2)
        assert expected_slice_codim(cfg, 1) == 6
        assert expected_slice_codim(cfg, 2) == 6 * 3

    def test_negative_degree_empty(self):
        assert slice_basis(grid_ci_config(), 1, -1) == ()


# -- the two symbolic-power routes ------------------------------------------------


ROUTE_CORPUS = [
    (grid_ci_config(), 2),
    (collinear_config(3), 2),
    (star_config(4, 2), 2),
    (conic_config(4), 2),
    (f3_twelve_config(), 1),
]


class TestSymbolicRoutes:
    @pytest.mark.parametrize(
        "cfg,mmax", ROUTE_CORPUS, ids=[c.label for c, _ in ROUTE_CORPUS]
    )
    def test_intersection_route_matches_slice_route(self, cfg, mmax):
        for m in range(1, mmax + 1):
            assert fat_ideal(cfg, m) == symbolic_ideal_from_slices(cfg, m)

    def test_mixed_multiplicities(self):
        pts = (
            ProjectivePoint(QQ, (1, 0, 0)),
            ProjectivePoint(QQ, (0, 1, 0)),
            ProjectivePoint(QQ, (1, 1, 1)),
        )
        cfg = FatPointConfig(QQ, 2, pts, (2, 1, 1))
        assert fat_ideal(cfg, 1) == symbolic_ideal_from_slices(cfg, 1)
        assert fat_ideal(cfg, 2) == symbolic_ideal_from_slices(cfg, 2)

    def test_scale_monotone(self):
        cfg = star_config(4, 2)
        high = fat_ideal(cfg, 2)
        low = fat_ideal(cfg, 1)
        ok, _ = ideal_contains(low, high)
        assert ok

    def test_ordinary_power_inside_symbolic(self):
        cfg = grid_ci_config()
        I = fat_ideal(cfg, 1)
        ok, _ = ideal_contains(fat_ideal(cfg, 2), ideal_power(I, 2))
        assert ok

    def test_point_permutation_invariance(self):
        cfg = star_config(4, 2)
        perm = (3, 1, 5, 0, 2, 4)
        shuffled = FatPointConfig(
            QQ, 2,
            tuple(cfg.points[i] for i in perm),
            tuple(cfg.mults[i] for i in perm),
        )
        assert fat_ideal(shuffled, 2) == fat_ideal(cfg, 2)


# -- hyperplane decomposition ------------------------------------------------------


class TestHyperplaneDecomposition:
    def test_slice_config(self):
        cfg = collinear_config(3)
        small = hyperplane_slice_config(cfg)
        assert small.dim == 1
        assert small.npoints == 3
        assert small.mults == cfg.mults

    def test_rejects_points_off_the_hyperplane(self):
        with pytest.raises(InvalidParams):
            hyperplane_slice_config(grid_ci_config())

    def test_collinear_decomposition_holds(self):
        cfg = collinear_config(3)
        for m in (1, 2, 3):
            assert hyperplane_decomposition_check(cfg, m)

    def test_line_power_is_extremal_generator(self):
        # all points sit on x0 = 0, so x0^m lies in every symbolic power
        cfg = collinear_config(3)
        ring = cfg.ring()
        x0 = ring.var(0)
        for m in (1, 2, 3):
            assert fat_ideal(cfg, m).contains_poly(x0**m)


# -- serialisation ------------------------------------------------------------------


class TestSerialisation:
    def test_round_trip(self):
        cfg = star_config(4, 2)
        data = config_to_json(cfg)
        back = config_from_json(data)
        assert back == cfg
        assert back.label == cfg.label

    def test_round_trip_prime_field(self):
        cfg = f3_twelve_config()
        back = config_from_json(config_to_json(cfg))
        assert back == cfg
        assert back.field == GF(3)

    def test_round_trip_sampled_flags(self):
        cfg = generic_config(4, seed=9)
        back = config_from_json(config_to_json(cfg))
        assert back == cfg
        assert back.sampled is True
        assert back.seed == 9

    def test_legacy_dimension_key(self):
        data = config_to_json(grid_ci_config())
        data["dim"] = data.pop("N")
        assert config_from_json(data) == grid_ci_config()

    def test_missing_dimension_rejected(self):
        data = config_to_json(grid_ci_config())
        del data["N"]
        with pytest.raises(InvalidParams):
            config_from_json(data)

    def test_named_passthrough(self):
        cfg = config_from_json({"named": "collinear", "params": {"n": 3}})
        assert cfg == collinear_config(3)

    def test_fractional_coordinates(self):
        data = {
            "field": {"type": "Q"},
            "N": 2,
            "points": [{"coords": ["1/2", "1/3", "1"], "mult": 2}],
        }
        cfg = config_from_json(data)
        assert cfg.points[0] == ProjectivePoint(QQ, (3, 2, 6))
        assert cfg.mults == (2,)

    def test_bad_coordinate_string(self):
        data = {
            "field": {"type": "Q"},
            "N": 2,
            "points": [{"coords": ["one", "0", "0"], "mult": 1}],
        }
        with pytest.raises(InvalidParams):
            config_from_json(data)

    def test_load_config(self, tmp_path):
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(config_to_json(conic_config(4))))
        assert load_config(str(path)) == conic_config(4)


# -- property tests -----------------------------------------------------------------


def small_configs():
    coords = st.tuples(
        st.integers(min_value=0, max_value=6),
        st.integers(min_value=0, max_value=6),
        st.integers(min_value=0, max_value=6),
    ).filter(lambda c: any(c))
    points = st.lists(
        coords.map(lambda c: ProjectivePoint(GF(7), c)),
        min_size=1, max_size=3, unique=True,
    )
    mults = st.lists(st.integers(min_value=1, max_value=2), min_size=3, max_size=3)
    return st.builds(
        lambda pts, ms: FatPointConfig(GF(7), 2, tuple(pts), tuple(ms[: len(pts)])),
        points, mults,
    )


class TestProperties:
    @settings(max_examples=25, deadline=None)
    @given(small_configs())
    def test_routes_agree(self, cfg):
        assert fat_ideal(cfg, 1) == symbolic_ideal_from_slices(cfg, 1)
        assert fat_ideal(cfg, 2) == symbolic_ideal_from_slices(cfg, 2)

    @settings(max_examples=25, deadline=None)
    @given(small_configs())
    def test_linear_form_products_are_members(self, cfg):
        # one linear form through each point, raised to its multiplicity,
        # vanishes to the required order everywhere
        ring = cfg.ring()
        f = ring.one()
        for pt, m in zip(cfg.points, cfg.mults):
            form = point_ideal(ring, pt).generators[0]
            f = f * form**m
        assert fat_ideal(cfg, 1).contains_poly(f)

    @settings(max_examples=25, deadline=None)
    @given(small_configs())
    def test_scaling_shrinks_the_ideal(self, cfg):
        ok, _ = ideal_contains(fat_ideal(cfg, 1), fat_ideal(cfg, 2))
        assert ok
