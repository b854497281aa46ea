import itertools
import random
from fractions import Fraction

import pytest

from antisymid.algebra import FactoredRational, SubsetFactor, fr_equal, fr_eval
from antisymid.identity import (
    BudgetExceeded,
    DegeneratePointExhaustion,
    build_lhs,
    build_rhs,
    has_pole,
    lhs_term,
    lhs_value,
    sample_point,
    verify_numeric,
    verify_symbolic,
)
from antisymid.permutation import Permutation, enumerate_permutations, relabel, transposition

from conftest import X, fr


def test_lhs_term_examples():
    assert lhs_term(1, Permutation((1,))) == fr(X(1), {1})
    assert lhs_term(2, Permutation((1, 2))) == fr(X(1) * X(2) ** 2, {2}, {1, 2})
    assert lhs_term(2, Permutation((2, 1))) == fr(-X(2) * X(1) ** 2, {1}, {1, 2})


def test_build_examples():
    assert fr_equal(build_lhs(1), fr(X(1), {1}))
    two = fr(X(1) * X(2) * (X(2) - X(1)), {1}, {2}, {1, 2})
    assert build_lhs(2) == two
    assert build_rhs(2) == two
    assert build_rhs(1) == fr(X(1), {1})
    vdm = X(1) * X(2) * X(3) * (X(2) - X(1)) * (X(3) - X(1)) * (X(3) - X(2))
    assert build_rhs(3).numerator == vdm
    assert fr_equal(build_lhs(3), build_rhs(3))


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_verify_symbolic(k, each_backend):
    rep = verify_symbolic(k)
    assert rep.equal and rep.witness is None
    assert rep.lhs_term_count == [1, 2, 6, 24][k - 1]
    assert rep.numerator_monomials == [1, 2, 12, 240][k - 1]


def test_symbolic_budget():
    with pytest.raises(BudgetExceeded):
        verify_symbolic(6)
    with pytest.raises(BudgetExceeded):
        verify_symbolic(3, max_k=2)


def test_numeric_example_point():
    pt = {1: Fraction(1, 2), 2: Fraction(1, 3)}
    assert lhs_value(2, pt) == Fraction(-1, 10)
    assert fr_eval(build_rhs(2), pt) == Fraction(-1, 10)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_lhs_value_matches_termwise_eval(k):
    rng = random.Random(k)
    for _ in range(4):
        pt = sample_point(rng, k)
        if has_pole(k, pt):
            continue
        expect = sum((fr_eval(lhs_term(k, pi), pt) for pi in enumerate_permutations(k)), Fraction(0))
        assert lhs_value(k, pt) == expect
        half = len(list(enumerate_permutations(k))) // 2
        assert lhs_value(k, pt, 0, half) + lhs_value(k, pt, half) == expect


def test_sample_point_range():
    rng = random.Random(1)
    for _ in range(200):
        for v in sample_point(rng, 3).values():
            assert 0 < v < 1 and v.denominator <= 97


def test_verify_numeric_k5_seed42():
    rep = verify_numeric(5, trials=20, seed=42)
    assert rep.equal and rep.points_tested == 20 and rep.seed == 42


def test_numeric_parallel_identical():
    a = verify_numeric(4, trials=6, seed=3, workers=1).to_dict()
    b = verify_numeric(4, trials=6, seed=3, workers=2).to_dict()
    a.pop("elapsed"), b.pop("elapsed")
    assert a == b


def test_pole_exhaustion():
    def always_pole(rng, k):
        return {i: Fraction(1) for i in range(1, k + 1)}

    with pytest.raises(DegeneratePointExhaustion):
        verify_numeric(3, trials=2, sampler=always_pole)


def test_pole_points_resampled():
    calls = []

    def sometimes_pole(rng, k):
        calls.append(1)
        if len(calls) % 2:
            return {i: Fraction(1, 2) for i in range(1, k)} | {k: Fraction(2)}
        return sample_point(rng, k)

    rep = verify_numeric(3, trials=4, sampler=sometimes_pole)
    assert rep.equal and rep.extra["rejected_points"] == 4


@pytest.mark.parametrize("k", [2, 3, 4])
def test_both_sides_alternate(k):
    lhs, rhs = build_lhs(k), build_rhs(k)
    for i, j in itertools.combinations(range(1, k + 1), 2):
        t = transposition(k, i, j)
        assert fr_equal(relabel(lhs, t), -lhs)
        assert fr_equal(relabel(rhs, t), -rhs)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_denominator_shapes(k):
    subsets = {SubsetFactor(s) for r in range(1, k + 1) for s in itertools.combinations(range(1, k + 1), r)}
    assert set(build_lhs(k).denominator) <= subsets
    assert all(len(f.indices) <= 2 for f in build_rhs(k).denominator)


def test_witness_on_disagreement():
    from antisymid.algebra import first_difference

    wrong = FactoredRational(build_rhs(3).numerator + X(1), build_rhs(3).denominator)
    assert first_difference(build_lhs(3), wrong) is not None
