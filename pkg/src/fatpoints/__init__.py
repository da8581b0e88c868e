"""Exact arithmetic for ideals of fat points in projective space.

The package computes ordinary and symbolic powers of point ideals over Q
and GF(p), their numerical characters (initial degree, Hilbert function,
regularity), and containment relations between the two kinds of powers.
"""

from .errors import (
    FieldMismatch,
    InvalidParams,
    LengthMismatch,
    ResourceLimit,
    RingMismatch,
    ZeroIdeal,
)
from .field import GF, QQ, PrimeField, RationalField, Scalar, scalar_from_string
from .polyring import (
    Block,
    GrevLex,
    Monomial,
    Ordering,
    Polynomial,
    Ring,
    compare_monomials,
    monomials_of_degree,
    polynomial_gcd,
)
from .ideals import (
    Budget,
    Ideal,
    autoreduce_generators,
    groebner,
    groebner_upto,
    ideal_contains,
    ideal_equal,
    ideal_intersect,
    ideal_power,
    ideal_product,
    ideal_sum,
    normal_form,
)
from .schemes import (
    FatPointConfig,
    ProjectivePoint,
    collinear_config,
    config_from_json,
    config_to_json,
    conic_config,
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
from .invariants import CharacterTable, alpha, fat_degree, hilbert_profile
from .containment import (
    Verdict,
    Window,
    all_claim_ids,
    applicable_claim_ids,
    check_containment,
    claim_description,
    claim_status,
    cross_check_criteria,
    implication_checks,
    modular_screen,
    run_claims,
)

__version__ = "0.1.0"

__all__ = [
    "FieldMismatch",
    "InvalidParams",
    "LengthMismatch",
    "ResourceLimit",
    "RingMismatch",
    "ZeroIdeal",
    "GF",
    "QQ",
    "PrimeField",
    "RationalField",
    "Scalar",
    "scalar_from_string",
    "Block",
    "GrevLex",
    "Monomial",
    "Ordering",
    "Polynomial",
    "Ring",
    "compare_monomials",
    "monomials_of_degree",
    "polynomial_gcd",
    "Budget",
    "Ideal",
    "autoreduce_generators",
    "groebner",
    "groebner_upto",
    "ideal_contains",
    "ideal_equal",
    "ideal_intersect",
    "ideal_power",
    "ideal_product",
    "ideal_sum",
    "normal_form",
    "FatPointConfig",
    "ProjectivePoint",
    "collinear_config",
    "config_from_json",
    "config_to_json",
    "conic_config",
    "f3_twelve_config",
    "f3_twelve_line_product",
    "fat_ideal",
    "generic_config",
    "grid_ci_config",
    "hyperplane_decomposition_check",
    "hyperplane_slice_config",
    "irrelevant_ideal",
    "load_config",
    "named_config",
    "point_ideal",
    "slice_basis",
    "slice_dim",
    "star_config",
    "symbolic_ideal_from_slices",
    "CharacterTable",
    "alpha",
    "fat_degree",
    "hilbert_profile",
    "Verdict",
    "Window",
    "all_claim_ids",
    "applicable_claim_ids",
    "check_containment",
    "claim_description",
    "claim_status",
    "cross_check_criteria",
    "implication_checks",
    "modular_screen",
    "run_claims",
    "__version__",
]
