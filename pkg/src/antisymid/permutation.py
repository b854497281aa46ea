"""Permutations of {1..k}, variable relabeling and antisymmetrization.

A permutation acts on expressions by substitution, ``x_i -> x_{pi(i)}``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from collections.abc import Iterator

from .algebra import (
    FactoredRational,
    Monomial,
    PackedSum,
    Polynomial,
    SubsetFactor,
    combine_packed,
    fr_sum,
    fr_sum_packed,
    packing_for,
)
from .parallel import chunk_ranges, map_ordered


class IndexOutOfRange(ValueError):
    pass


class Permutation(tuple):
    """One-line notation: ``images[i-1] == pi(i)``."""

    __slots__ = ()

    def __new__(cls, images):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images!r} is not a permutation of 1..{len(images)}")
        return tuple.__new__(cls, images)

    @classmethod
    def identity(cls, k: int) -> "Permutation":
        return tuple.__new__(cls, range(1, k + 1))

    @property
    def k(self) -> int:
        return len(self)

    def __call__(self, i: int) -> int:
        return self[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """``(self o other)(i) = self(other(i))``."""
        if len(other) != len(self):
            raise ValueError("permutations of different size")
        return tuple.__new__(Permutation, (self[j - 1] for j in other))

    def inverse(self) -> "Permutation":
        out = [0] * len(self)
        for i, j in enumerate(self, 1):
            out[j - 1] = i
        return tuple.__new__(Permutation, out)

    def inversions(self) -> int:
        n = 0
        for a in range(len(self)):
            x = self[a]
            for b in range(a + 1, len(self)):
                if self[b] < x:
                    n += 1
        return n

    def sign(self) -> int:
        return -1 if self.inversions() % 2 else 1

    def __str__(self):
        return " ".join(map(str, self))

    def __repr__(self):
        return f"Permutation({tuple(self)})"


def transposition(k: int, i: int, j: int) -> Permutation:
    images = list(range(1, k + 1))
    images[i - 1], images[j - 1] = images[j - 1], images[i - 1]
    return Permutation(images)


def enumerate_permutations(k: int, start: int = 0, stop: int | None = None) -> Iterator[Permutation]:
    """All of S_k in lexicographic order of the image sequence, optionally a slice."""
    if k < 1:
        raise ValueError("k must be >= 1")
    it = itertools.permutations(range(1, k + 1))
    if start or stop is not None:
        it = itertools.islice(it, start, stop)
    for p in it:
        yield tuple.__new__(Permutation, p)


def sign(pi: Permutation) -> int:
    return pi.sign()


def _relabel_monomial(m: Monomial, pi: Permutation) -> Monomial:
    k = len(pi)
    out = []
    for i, e in m:
        if i > k:
            raise IndexOutOfRange(f"x{i} is outside 1..{k}")
        out.append((pi[i - 1], e))
    out.sort()
    return Monomial._raw(tuple(out))


def _relabel_poly(p: Polynomial, pi: Permutation) -> Polynomial:
    return Polynomial._wrap({_relabel_monomial(m, pi): c for m, c in p.terms.items()})


def _relabel_factor(f: SubsetFactor, pi: Permutation) -> SubsetFactor:
    k = len(pi)
    if max(f.indices) > k:
        raise IndexOutOfRange(f"factor {f.to_str()} mentions an index outside 1..{k}")
    return SubsetFactor(pi[i - 1] for i in f.indices)


def relabel(e, pi: Permutation):
    """Substitute ``x_i -> x_{pi(i)}`` in a Polynomial, SubsetFactor or FactoredRational."""
    if isinstance(e, Polynomial):
        return _relabel_poly(e, pi)
    if isinstance(e, SubsetFactor):
        return _relabel_factor(e, pi)
    if isinstance(e, FactoredRational):
        den = Counter({_relabel_factor(f, pi): c for f, c in e.denominator.items()})
        return FactoredRational._wrap(_relabel_poly(e.numerator, pi), den)
    raise TypeError(f"cannot relabel {type(e).__name__}")


def _orbit_packing(e: FactoredRational, k: int):
    # every relabeled denominator lies inside the S_k-orbit of e's factors
    top_by_size: dict[int, int] = {}
    for f, c in e.denominator.items():
        n = len(f.indices)
        top_by_size[n] = max(top_by_size.get(n, 0), c)
    per_var = sum(math.comb(k - 1, n - 1) * c for n, c in top_by_size.items())
    num_max = max(e.numerator.max_exponents().values(), default=0)
    return packing_for(k, num_max + per_var)


def _signed_terms(e: FactoredRational, k: int, start: int, stop: int) -> list[FactoredRational]:
    terms = []
    for pi in enumerate_permutations(k, start, stop):
        t = relabel(e, pi)
        terms.append(t if pi.sign() > 0 else -t)
    return terms


def _antisym_range(e: FactoredRational, k: int, start: int, stop: int, packing) -> PackedSum | FactoredRational:
    terms = _signed_terms(e, k, start, stop)
    if packing is None:
        return fr_sum(terms)
    return fr_sum_packed(terms, packing)


def _prepare(e, k: int) -> FactoredRational:
    if isinstance(e, Polynomial):
        e = FactoredRational(e)
    if e.max_index > k:
        raise IndexOutOfRange(f"expression mentions x{e.max_index}, outside 1..{k}")
    return e


def antisymmetrize_packed(e, k: int, workers: int = 1) -> PackedSum:
    """:func:`antisymmetrize` for integer coefficients, result left packed."""
    e = _prepare(e, k)
    if not e.numerator.is_integral():
        raise ValueError("packed antisymmetrization needs integer coefficients")
    packing = _orbit_packing(e, k)
    ranges = chunk_ranges(math.factorial(k), workers)
    parts = map_ordered(_antisym_range, [(e, k, a, b, packing) for a, b in ranges], workers)
    return combine_packed(parts)


def antisymmetrize(e, k: int, workers: int = 1) -> FactoredRational:
    """``sum(sign(pi) * relabel(e, pi) for pi in S_k)``.

    With ``workers > 1`` contiguous ranges of S_k are summed in separate
    processes; the result is identical to the sequential one.
    """
    e = _prepare(e, k)
    if e.numerator.is_integral():
        return antisymmetrize_packed(e, k, workers).unpack()
    ranges = chunk_ranges(math.factorial(k), workers)
    parts = map_ordered(_antisym_range, [(e, k, a, b, None) for a, b in ranges], workers)
    return fr_sum(parts)
