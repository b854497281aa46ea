"""The q -> 1 limit as an integral over the ordered simplex 0 <= t_1 <= ... <= t_k <= 1.

Four evaluation routes that check each other:

* ``closed_form``  prod_{i<j}(a_i - a_j) / (prod a_i * prod_{i<j}(a_i + a_j))
* ``perm_sum``     sum over S_k of sign(pi) / prod_j s_j(pi), suffix sums s_j
* ``nested_simplex_integrate(det_polynomial(a), k)``  exact iterated integration
* ``mc_estimate``  Monte Carlo with sorted uniform points

The simplex integral of det(t_i^(a_j - 1)) equals (-1)^(k(k-1)/2) times the
other two exact values.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from . import backend
from .algebra import Monomial, Polynomial, format_rational
from .parallel import chunk_ranges, map_ordered, resolve_workers
from .permutation import enumerate_permutations

RNG_NAME = "splitmix64-counter"
MC_CHUNK = 1 << 16

_RATIONAL = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


class NonIntegerExponent(ValueError):
    pass


@dataclass(frozen=True)
class RationalExponentVector:
    a: tuple[Fraction, ...]

    def __post_init__(self):
        vals = []
        for v in self.a:
            if isinstance(v, (float, bool)):
                raise TypeError(f"exponents must be exact (int or Fraction), got {v!r}")
            v = Fraction(v)
            if v <= 0:
                raise ValueError(f"exponents must be positive, got {v}")
            vals.append(v)
        if not vals:
            raise ValueError("exponent vector must be nonempty")
        object.__setattr__(self, "a", tuple(vals))

    @classmethod
    def parse(cls, text: str) -> "RationalExponentVector":
        """``"1/2,3/2"`` or ``"1,2,3"``; decimal or float notation is rejected."""
        parts = text.split(",")
        for p in parts:
            if not _RATIONAL.match(p):
                raise ValueError(f"expected integers or p/q rationals separated by commas, got {p.strip()!r}")
        return cls(tuple(Fraction(p.replace(" ", "")) for p in parts))

    @property
    def k(self) -> int:
        return len(self.a)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.a)

    def integers(self) -> tuple[int, ...]:
        if not self.is_integral():
            raise NonIntegerExponent(f"{self} has non-integer entries")
        return tuple(int(v) for v in self.a)

    def __len__(self):
        return len(self.a)

    def __iter__(self):
        return iter(self.a)

    def __str__(self):
        return ",".join(format_rational(v) for v in self.a)


def _vector(a) -> RationalExponentVector:
    return a if isinstance(a, RationalExponentVector) else RationalExponentVector(tuple(a))


def closed_form(a) -> Fraction:
    a = _vector(a).a
    k = len(a)
    num = Fraction(1)
    den = Fraction(1)
    for v in a:
        den *= v
    for i in range(k):
        for j in range(i + 1, k):
            num *= a[i] - a[j]
            den *= a[i] + a[j]
    return num / den


def _perm_range(a: tuple[Fraction, ...], start: int, stop: int) -> Fraction:
    k = len(a)
    total = Fraction(0)
    for pi in enumerate_permutations(k, start, stop):
        prod = Fraction(1)
        s = Fraction(0)
        for pos in range(k, 0, -1):
            s += a[pi[pos - 1] - 1]
            prod *= s
        total += pi.sign() / prod
    return total


def perm_sum(a, workers: int = 1) -> Fraction:
    """``sum(sign(pi) / prod(suffix sums))`` by enumeration of S_k."""
    a = _vector(a).a
    ranges = chunk_ranges(math.factorial(len(a)), workers)
    parts = map_ordered(_perm_range, [(a, lo, hi) for lo, hi in ranges], workers)
    return sum(parts, Fraction(0))


def det_polynomial(a) -> Polynomial:
    """``det(t_i ** (a_j - 1))`` expanded; variable i stands for t_i."""
    ints = _vector(a).integers()
    k = len(ints)
    terms: dict[Monomial, int] = {}
    for pi in enumerate_permutations(k):
        m = Monomial.from_dense(ints[pi[i] - 1] - 1 for i in range(k))
        terms[m] = terms.get(m, 0) + pi.sign()
    return Polynomial({m: c for m, c in terms.items() if c})


def nested_simplex_integrate(p: Polynomial, k: int) -> Fraction:
    """Integral of ``p(t_1..t_k)`` over 0 <= t_1 <= ... <= t_k <= 1.

    Integrates t_1 from 0 to t_2, then t_2 from 0 to t_3, ..., t_k from 0 to
    1, term by term with ``t^m -> t^(m+1) / (m+1)``.
    """
    if p.max_index > k:
        raise ValueError(f"polynomial mentions t{p.max_index}, outside t1..t{k}")
    cur: dict[tuple[int, ...], Fraction] = {}
    for m, c in p.terms.items():
        e = m.dense(k)
        cur[e] = cur.get(e, 0) + Fraction(c)
    for i in range(k):
        nxt: dict[tuple[int, ...], Fraction] = {}
        for e, c in cur.items():
            m = e[i] + 1
            c = c / m
            e = list(e)
            e[i] = 0
            if i + 1 < k:
                e[i + 1] += m
            key = tuple(e)
            nxt[key] = nxt.get(key, 0) + c
        cur = {e: c for e, c in nxt.items() if c}
    return sum(cur.values(), Fraction(0))


def reversal_sign(k: int) -> int:
    return -1 if (k * (k - 1) // 2) % 2 else 1


@dataclass
class MCResult:
    estimate: float
    stderr: float
    samples: int
    seed: int
    rng: str = RNG_NAME

    def to_dict(self) -> dict:
        return {
            "estimate": _float12(self.estimate),
            "stderr": _float12(self.stderr),
            "samples": self.samples,
            "seed": self.seed,
            "rng": self.rng,
        }


def _float12(x: float) -> float:
    return float(f"{x:.12g}")


def _mc_chunk(exps, fexps, seed: int, lo: int, hi: int, backend_name: str):
    with backend.using(backend_name):
        kern = backend.get()
        v = kern.det_samples(list(exps), seed, lo, hi - lo, fexps)
    return math.fsum(v), math.fsum(v * v)


def mc_estimate(a, n: int, seed: int = 0, workers: int = 1) -> MCResult:
    """Plain Monte Carlo over the ordered simplex.

    Sample i uses coordinates drawn from a counter-based generator keyed by
    (seed, i), sorted ascending; the mean of the integrand divided by k!
    estimates the simplex integral. Samples are processed in fixed chunks
    and combined in chunk order, so the result does not depend on the
    number of workers.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    a = _vector(a)
    k = a.k
    if a.is_integral():
        exps, fexps = [int(v) - 1 for v in a.a], None
    else:
        exps, fexps = [0] * k, [float(v - 1) for v in a.a]
    chunks = [(lo, min(lo + MC_CHUNK, n)) for lo in range(0, n, MC_CHUNK)]
    workers = resolve_workers(workers)
    if workers > 1 and len(chunks) > 1:
        groups = chunk_ranges(len(chunks), workers)
        jobs = [(exps, fexps, seed, chunks[g0][0], chunks[g1 - 1][1], backend.name()) for g0, g1 in groups]
        per_chunk = map_ordered(_mc_chunks, jobs, workers)
        sums = [s for part in per_chunk for s in part]
    else:
        sums = _mc_chunks(exps, fexps, seed, 0, n, backend.name())
    total = math.fsum(s for s, _ in sums)
    total_sq = math.fsum(q for _, q in sums)
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0) * n / (n - 1) if n > 1 else 0.0
    norm = math.factorial(k)
    return MCResult(mean / norm, math.sqrt(var / n) / norm, n, seed)


def _mc_chunks(exps, fexps, seed, lo, hi, backend_name):
    out = []
    for c0 in range(lo, hi, MC_CHUNK):
        out.append(_mc_chunk(exps, fexps, seed, c0, min(c0 + MC_CHUNK, hi), backend_name))
    return out


@dataclass
class IntegralReport:
    a: RationalExponentVector
    closed_form: Fraction | None = None
    perm_sum: Fraction | None = None
    nested: Fraction | None = None
    mc: MCResult | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def sign_factor(self) -> int:
        return reversal_sign(self.a.k)

    @property
    def agree(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        d: dict = {"a": [format_rational(v) for v in self.a.a], "k": self.a.k}
        if self.closed_form is not None:
            d["closed_form"] = format_rational(self.closed_form)
        if self.perm_sum is not None:
            d["perm_sum"] = format_rational(self.perm_sum)
        if self.nested is not None:
            d["nested"] = format_rational(self.nested)
        d["sign_factor"] = self.sign_factor
        if self.mc is not None:
            d["mc"] = self.mc.to_dict()
        d["agree"] = self.agree
        if self.failures:
            d["failures"] = list(self.failures)
        return d


METHODS = ("closed", "perm-sum", "nested", "mc")


def cross_check(a, n: int = 100_000, seed: int = 0, methods=METHODS, workers: int = 1) -> IntegralReport:
    """Run the requested routes and compare every pair that is available.

    closed == perm_sum exactly; nested == sign_factor * perm_sum exactly;
    |mc - exact integral| <= 4 stderr.
    """
    a = _vector(a)
    methods = set(methods)
    unknown = methods - set(METHODS)
    if unknown:
        raise ValueError(f"unknown methods {sorted(unknown)}")
    rep = IntegralReport(a)
    if "closed" in methods:
        rep.closed_form = closed_form(a)
    if "perm-sum" in methods:
        rep.perm_sum = perm_sum(a, workers=workers)
    if "nested" in methods:
        rep.nested = nested_simplex_integrate(det_polynomial(a), a.k)
    if "mc" in methods:
        rep.mc = mc_estimate(a, n, seed, workers=workers)

    if rep.closed_form is not None and rep.perm_sum is not None and rep.closed_form != rep.perm_sum:
        rep.failures.append(f"closed_form {rep.closed_form} != perm_sum {rep.perm_sum}")
    exact = [v for v in (rep.perm_sum, rep.closed_form) if v is not None]
    if rep.nested is not None and exact and rep.nested != rep.sign_factor * exact[0]:
        rep.failures.append(f"nested {rep.nested} != {rep.sign_factor} * {exact[0]}")
    if rep.mc is not None:
        target = rep.nested if rep.nested is not None else rep.sign_factor * (exact[0] if exact else closed_form(a))
        if abs(rep.mc.estimate - float(target)) > 4 * rep.mc.stderr:
            rep.failures.append(
                f"mc {rep.mc.estimate:.6g} is {abs(rep.mc.estimate - float(target)) / rep.mc.stderr if rep.mc.stderr else math.inf:.2f} stderr from {target}"
            )
    return rep
