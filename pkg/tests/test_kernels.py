import random

import numpy as np
import pytest

from antisymid import _kernels_py, backend
from antisymid.algebra import FactoredRational, SubsetFactor, fr_sum, packing_for
from antisymid.identity import build_lhs, build_rhs

from conftest import X, random_poly

needs_ext = pytest.mark.skipif("cython" not in backend.available(), reason="extension not built")


def _rand_packed(rng, n=30, width=40):
    return {rng.randrange(1 << width): rng.randint(-50, 50) or 1 for _ in range(n)}


@needs_ext
def test_poly_kernels_agree():
    from antisymid import _ckernels as c

    py = _kernels_py
    rng = random.Random(0)
    for _ in range(20):
        a, b = _rand_packed(rng), _rand_packed(rng)
        pa, pb = py.pack(a), py.pack(b)
        ca, cb = c.pack(a), c.pack(b)
        assert c.unpack(c.add(ca, cb)) == py.unpack(py.add(pa, pb))
        assert c.unpack(c.negate(ca)) == py.unpack(py.negate(pa))
        shifts = [rng.randrange(1 << 8) for _ in range(3)]
        assert c.unpack(c.mul_binomials(ca, shifts)) == py.unpack(py.mul_binomials(pa, shifts))
        small_a = {k & 0xFFFF: v for k, v in a.items()}
        small_b = {k & 0xFFFF: v for k, v in b.items()}
        assert c.unpack(c.mul(c.pack(small_a), c.pack(small_b))) == py.unpack(py.mul(py.pack(small_a), py.pack(small_b)))
        assert c.equal(ca, ca) and c.equal(ca, cb) == (a == b)


@needs_ext
def test_overflow_is_detected():
    from antisymid import _ckernels as c

    big = c.pack({1: 2**62})
    with pytest.raises(OverflowError):
        c.add(big, big)


def test_overflow_falls_back_to_python():
    # coefficients beyond 64 bits force the pure-Python retry
    items = [FactoredRational(X(1) * 2**70, [SubsetFactor({1})]), FactoredRational(X(2) * 2**70, [SubsetFactor({2})])]
    for name in backend.available():
        with backend.using(name):
            s = fr_sum(items)
        assert s.numerator.terms[next(iter(s.numerator.terms))] % 2**70 == 0


@pytest.mark.parametrize("k", [3, 4])
def test_backends_give_identical_expressions(k):
    out = []
    for name in backend.available():
        with backend.using(name):
            build_rhs.cache_clear()
            out.append((build_lhs(k), build_rhs(k)))
    build_rhs.cache_clear()
    assert all(o == out[0] for o in out)


@pytest.mark.parametrize("exps,fexps", [([0, 1], None), ([0, 1, 2], None), ([0, 1, 2, 3, 4, 5, 6], None), ([0, 0], [-0.5, 0.5])])
def test_mc_samples_bit_identical(exps, fexps):
    vals = []
    for name in backend.available():
        with backend.using(name):
            vals.append(np.asarray(backend.get().det_samples(exps, 11, 1000, 500, fexps)))
    for v in vals[1:]:
        assert np.array_equal(v, vals[0])


def test_uniforms_in_unit_interval():
    u = _kernels_py.uniforms(3, 0, 1000, 4)
    assert u.min() >= 0.0 and u.max() < 1.0


def test_packing_roundtrip():
    p = random_poly(random.Random(2), frac=False)
    pk = packing_for(3, 3)
    assert pk.unpack_terms(pk.pack_terms(p)) == p
