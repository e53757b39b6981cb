"""Structured Toeplitz/Hankel calculus and symbol inverse problems.

The package recovers the unique analytic matrix symbol g whose Hankel
operator sends the coefficient columns of a data quadruple
{alpha, beta, gamma, delta} to unit columns, with exact closed-form
solvers for polynomial data, windowed operator solvers, factorization
solvers and a full diagnostic suite for the solvability conditions.
"""

from .series import (
    CANONICAL_TOL,
    LaurentPoly,
    SubspaceTag,
    as_matrix,
    lp_adjoint,
    lp_det,
    lp_det_cofactor,
    lp_eval,
    lp_mul,
    lp_project,
    poly_gap,
)
from .structured import (
    OpKind,
    StructuredOp,
    Window,
    apply_column,
    build,
    check_product_rules,
    check_shift_relations,
    margin_for,
)
from .inversion import (
    BigOp,
    DataSet,
    build_m,
    build_omega,
    check_lemma_suite,
    identity_residual_triple,
    inverse_margin,
    trivial_data,
    verify_inverse,
)
from .diagnostics import (
    CheckEntry,
    CheckReport,
    check_appendix_structure,
    check_identities,
    check_strict_contraction,
    check_zero_locations,
    hankel_norm,
    inclusion_residuals,
    verify_solution,
)
from .solver import (
    DEFAULT_TOL,
    SolveReport,
    solve_all,
    solve_dual_phi,
    solve_factorization,
    solve_polynomial,
    solve_truncated,
    tri_toeplitz_solve,
)
from .oracle import BruteRecovery, Fixture, brute_recover_g, random_fixture, synthesize_data
from . import errors

__version__ = "0.1.0"

__all__ = [
    "BigOp",
    "BruteRecovery",
    "CANONICAL_TOL",
    "CheckEntry",
    "CheckReport",
    "DEFAULT_TOL",
    "DataSet",
    "Fixture",
    "LaurentPoly",
    "OpKind",
    "SolveReport",
    "StructuredOp",
    "SubspaceTag",
    "Window",
    "apply_column",
    "as_matrix",
    "brute_recover_g",
    "build",
    "build_m",
    "build_omega",
    "check_appendix_structure",
    "check_identities",
    "check_lemma_suite",
    "check_product_rules",
    "check_shift_relations",
    "check_strict_contraction",
    "check_zero_locations",
    "errors",
    "hankel_norm",
    "identity_residual_triple",
    "inclusion_residuals",
    "inverse_margin",
    "lp_adjoint",
    "lp_det",
    "lp_det_cofactor",
    "lp_eval",
    "lp_mul",
    "lp_project",
    "margin_for",
    "poly_gap",
    "random_fixture",
    "solve_all",
    "solve_dual_phi",
    "solve_factorization",
    "solve_polynomial",
    "solve_truncated",
    "synthesize_data",
    "tri_toeplitz_solve",
    "trivial_data",
    "verify_inverse",
    "verify_solution",
]
