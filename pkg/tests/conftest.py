import random
from fractions import Fraction

import pytest
from hypothesis import settings

from antisymid import backend
from antisymid.algebra import FactoredRational, Monomial, Polynomial, SubsetFactor

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def X(i):
    return Polynomial.var(i)


ONE = Polynomial.constant(1)


def fr(num, *subsets):
    return FactoredRational(num, [SubsetFactor(s) for s in subsets])


def random_poly(rng: random.Random, nvars=3, nterms=4, maxdeg=3, frac=True):
    terms = {}
    for _ in range(nterms):
        m = Monomial({i: rng.randint(0, maxdeg) for i in range(1, nvars + 1)})
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 5)) if frac else rng.randint(-9, 9)
        terms[m] = terms.get(m, 0) + c
    return Polynomial(terms)


@pytest.fixture(params=backend.available())
def each_backend(request):
    with backend.using(request.param):
        yield request.param
