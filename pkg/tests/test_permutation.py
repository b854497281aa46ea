import itertools
import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from antisymid.algebra import FactoredRational, SubsetFactor, fr_equal
from antisymid.permutation import (
    IndexOutOfRange,
    Permutation,
    antisymmetrize,
    enumerate_permutations,
    relabel,
    sign,
    transposition,
)

from conftest import X, fr


@pytest.mark.parametrize("k", range(1, 8))
def test_enumeration_cardinality(k):
    perms = list(enumerate_permutations(k))
    assert len(perms) == math.factorial(k) == len(set(perms))
    assert perms[0] == Permutation.identity(k)
    assert perms == sorted(perms)


def test_enumeration_examples():
    p3 = list(enumerate_permutations(3))
    assert tuple(p3[0]) == (1, 2, 3) and tuple(p3[-1]) == (3, 2, 1)
    assert list(enumerate_permutations(1)) == [Permutation((1,))]
    assert len(list(enumerate_permutations(4, 5, 17))) == 12


def test_sign_examples():
    assert sign(Permutation.identity(4)) == 1
    assert sign(Permutation((2, 1))) == -1
    assert sign(Permutation((2, 3, 1))) == 1
    assert str(Permutation((2, 3, 1))) == "2 3 1"


perm_pairs = st.integers(1, 7).flatmap(
    lambda k: st.tuples(st.permutations(range(1, k + 1)), st.permutations(range(1, k + 1)))
)


@given(perm_pairs)
def test_sign_homomorphism(pair):
    p, s = Permutation(pair[0]), Permutation(pair[1])
    assert sign(p.compose(s)) == sign(p) * sign(s)
    assert p.compose(p.inverse()) == Permutation.identity(p.k)


def test_relabel_examples():
    swap = Permutation((2, 1))
    assert relabel(X(1) * X(2) ** 2, swap) == X(2) * X(1) ** 2
    assert relabel(SubsetFactor({2}), swap) == SubsetFactor({1})
    e = fr(X(1) * X(2) ** 2, {2}, {1, 2})
    assert relabel(e, Permutation.identity(2)) == e
    with pytest.raises(IndexOutOfRange):
        relabel(X(3), swap)


def test_relabel_is_substitution():
    # x_i -> x_{pi(i)}: x1 goes to x_{pi(1)}
    pi = Permutation((3, 1, 2))
    assert relabel(X(1) * X(2) ** 2 * X(3) ** 3, pi) == X(3) * X(1) ** 2 * X(2) ** 3


def test_antisymmetrize_examples():
    e = fr(X(1), {1})
    assert antisymmetrize(e, 1) == e
    got = antisymmetrize(FactoredRational(X(1) * X(2) ** 2), 2)
    assert got == FactoredRational(X(1) * X(2) * (X(2) - X(1)))
    assert antisymmetrize(FactoredRational(X(1) * X(2)), 2).numerator.is_zero()


def _sample_exprs(k, seed):
    rng = random.Random(seed)
    num = X(1) ** rng.randint(0, 3) * X(k) ** rng.randint(1, 2) - rng.randint(1, 4) * X(min(2, k))
    subs = [rng.sample(range(1, k + 1), rng.randint(1, k)) for _ in range(2)]
    return FactoredRational(num, [SubsetFactor(s) for s in subs])


@pytest.mark.parametrize("k", range(2, 5))
def test_alternation(k):
    e = _sample_exprs(k, k)
    a = antisymmetrize(e, k)
    for i, j in itertools.combinations(range(1, k + 1), 2):
        assert fr_equal(relabel(a, transposition(k, i, j)), -a)


@pytest.mark.parametrize("k", range(2, 5))
def test_vanishes_on_symmetric_input(k):
    # invariant under swapping x1 and x2
    extra = X(k) ** 2 if k > 2 else X(1) + X(2)
    e = FactoredRational(X(1) * X(2) * extra, [SubsetFactor({1, 2})])
    assert antisymmetrize(e, k).numerator.is_zero()


def test_fraction_coefficients_take_generic_path():
    from fractions import Fraction

    e = FactoredRational(X(1) * Fraction(1, 2) + X(2) ** 2, [SubsetFactor({2})])
    a = antisymmetrize(e, 2)
    assert fr_equal(relabel(a, transposition(2, 1, 2)), -a)


def test_parallel_matches_sequential():
    e = _sample_exprs(4, 11)
    assert antisymmetrize(e, 4, workers=3) == antisymmetrize(e, 4, workers=1)
