"""Exact verification of an antisymmetrization identity over S_k, its
q -> 1 specialization, and the ordered-simplex integral it evaluates."""

__version__ = "0.1.0"

from .algebra import (
    FactoredRational,
    Monomial,
    Polynomial,
    SubsetFactor,
    factor_expand,
    fr_add,
    fr_equal,
    fr_eval,
    fr_sum,
    poly_add,
    poly_eval,
    poly_mul,
)
from .identity import build_lhs, build_rhs, lhs_term, verify_numeric, verify_symbolic
from .integral import closed_form, cross_check, det_polynomial, mc_estimate, nested_simplex_integrate, perm_sum
from .permutation import Permutation, antisymmetrize, enumerate_permutations, relabel, sign
from .qlimit import ExponentVector, check_limit_identity, limit_lhs, limit_rhs, qsubst_lhs_term, qsubst_rhs
