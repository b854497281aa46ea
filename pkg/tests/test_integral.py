import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from antisymid.algebra import Polynomial, poly_mul
from antisymid.integral import (
    NonIntegerExponent,
    RationalExponentVector,
    closed_form,
    cross_check,
    det_polynomial,
    mc_estimate,
    nested_simplex_integrate,
    perm_sum,
    reversal_sign,
)

from conftest import X

H = Fraction(1, 2)


def test_parse():
    assert RationalExponentVector.parse("1/2,3/2").a == (H, Fraction(3, 2))
    for bad in ("0.5", "1e3", "1,0", "x", "1/0"):
        with pytest.raises((ValueError, ZeroDivisionError)):
            RationalExponentVector.parse(bad)
    with pytest.raises(TypeError):
        RationalExponentVector((0.5,))


def test_closed_form_examples():
    assert closed_form((1, 2)) == Fraction(-1, 6)
    assert closed_form((2, 2)) == 0
    assert closed_form((1, 2, 3)) == Fraction(-1, 180)
    assert closed_form((H, Fraction(3, 2))) == Fraction(-2, 3)


def test_perm_sum_examples():
    assert perm_sum((5,)) == Fraction(1, 5)
    assert perm_sum((1, 2)) == Fraction(-1, 6)
    assert perm_sum((1, 2, 3)) == Fraction(-1, 180)
    assert perm_sum((H, Fraction(3, 2))) == Fraction(-2, 3)


def test_det_polynomial_examples():
    assert det_polynomial((1, 2)) == X(2) - X(1)
    assert det_polynomial((1, 3)) == X(2) ** 2 - X(1) ** 2
    vdm = poly_mul(poly_mul(X(2) - X(1), X(3) - X(1)), X(3) - X(2))
    assert det_polynomial((1, 2, 3)) == vdm
    with pytest.raises(NonIntegerExponent):
        det_polynomial((H, 1))


def test_nested_examples():
    assert nested_simplex_integrate(Polynomial.constant(1), 2) == H
    assert nested_simplex_integrate(X(2) - X(1), 2) == Fraction(1, 6)
    assert nested_simplex_integrate(det_polynomial((1, 2, 3)), 3) == Fraction(1, 180)
    assert nested_simplex_integrate(Polynomial.constant(1), 4) == Fraction(1, 24)
    with pytest.raises(ValueError):
        nested_simplex_integrate(X(3), 2)


def _distinct_vectors(kmax=4, top=6):
    for k in range(1, kmax + 1):
        yield from itertools.permutations(range(1, top + 1), k)


def test_nested_relation_exhaustive():
    # every ordered vector of distinct entries <= 6 with k <= 4
    for a in _distinct_vectors():
        k = len(a)
        assert nested_simplex_integrate(det_polynomial(a), k) == reversal_sign(k) * perm_sum(a)


@pytest.mark.parametrize(
    "a,closed,nested",
    [((1, 2), Fraction(-1, 6), Fraction(1, 6)), ((1, 2, 3), Fraction(-1, 180), Fraction(1, 180)), ((2, 4), Fraction(-1, 24), Fraction(1, 24))],
)
def test_cross_check_examples(a, closed, nested):
    rep = cross_check(a, n=20000, seed=1)
    assert rep.agree, rep.failures
    assert rep.closed_form == rep.perm_sum == closed
    assert rep.nested == nested
    assert rep.sign_factor == reversal_sign(len(a))


def test_cross_check_rational_skips_nested():
    rep = cross_check((H, Fraction(3, 2)), n=20000, methods=("closed", "perm-sum", "mc"))
    assert rep.agree and rep.nested is None


rationals = st.fractions(min_value=Fraction(1, 7), max_value=10, max_denominator=7)


@given(st.lists(rationals, min_size=1, max_size=5))
def test_closed_equals_perm_sum(a):
    assert closed_form(a) == perm_sum(a)


@given(st.lists(rationals, min_size=2, max_size=5), st.data())
def test_alternation(a, data):
    i, j = data.draw(st.lists(st.integers(0, len(a) - 1), min_size=2, max_size=2, unique=True))
    b = list(a)
    b[i], b[j] = b[j], b[i]
    assert closed_form(b) == -closed_form(a)
    assert perm_sum(b) == -perm_sum(a)


@given(st.lists(st.integers(1, 6), min_size=2, max_size=4, unique=True), st.data())
def test_det_alternation(a, data):
    i, j = data.draw(st.lists(st.integers(0, len(a) - 1), min_size=2, max_size=2, unique=True))
    b = list(a)
    b[i], b[j] = b[j], b[i]
    assert det_polynomial(b) == -det_polynomial(a)


@given(st.lists(rationals, min_size=1, max_size=5), rationals)
def test_homogeneity(a, lam):
    k = len(a)
    assert closed_form([lam * v for v in a]) == lam ** (-k) * closed_form(a)


@given(st.lists(rationals, min_size=1, max_size=4), st.data())
def test_repeated_entries_vanish(a, data):
    i = data.draw(st.integers(0, len(a) - 1))
    b = list(a) + [a[i]]
    assert perm_sum(b) == 0 == closed_form(b)


def test_mc_examples(each_backend):
    r = mc_estimate((2, 2), 100_000, seed=0)
    assert r.estimate == 0.0 and r.stderr == 0.0
    r = mc_estimate((3,), 100_000, seed=0)
    assert abs(r.estimate - 1 / 3) <= 3 * r.stderr
    r = mc_estimate((1, 2), 200_000, seed=5)
    assert abs(r.estimate - 1 / 6) <= 3 * r.stderr


def test_mc_volume_normalization():
    # integrand 1 at k=1; k! scaling at k>1 is pinned by the (1,2) and 7-variable checks
    r = mc_estimate((1,), 1000)
    assert r.estimate == 1.0


def test_mc_rational_exponents():
    r = mc_estimate((H, Fraction(3, 2)), 200_000, seed=2)
    target = reversal_sign(2) * closed_form((H, Fraction(3, 2)))
    assert abs(r.estimate - float(target)) <= 4 * r.stderr


def test_mc_large_k_uses_elimination():
    a = (1, 2, 3, 4, 5, 6, 7)
    r = mc_estimate(a, 70_000, seed=3)
    target = float(reversal_sign(7) * closed_form(a))
    assert abs(r.estimate - target) <= 4 * r.stderr


def test_mc_deterministic_across_workers():
    a = mc_estimate((1, 2, 3), 200_000, seed=9, workers=1)
    b = mc_estimate((1, 2, 3), 200_000, seed=9, workers=3)
    assert a == b


def test_mc_stderr_scaling():
    errs = [mc_estimate((1, 2), n, seed=4).stderr for n in (10**4, 10**5)]
    ratio = errs[0] / errs[1]
    assert math.sqrt(10) / 2 <= ratio <= 2 * math.sqrt(10)


def test_integral_positive_for_increasing_exponents():
    # generalized Vandermonde on ordered points is totally positive
    for k in range(1, 5):
        for a in itertools.combinations(range(1, 7), k):
            assert nested_simplex_integrate(det_polynomial(a), k) > 0
