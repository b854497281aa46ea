"""Both sides of the antisymmetrization identity and their verification.

Left side::

    sum over pi in S_k of sign(pi) * pi[ x1 x2^2 ... xk^k /
        ((1 - xk)(1 - xk x(k-1)) ... (1 - xk ... x1)) ]

Right side::

    x1...xk * prod_{i<j} (xj - xi) / (prod_i (1 - xi) * prod_{i<j} (1 - xi xj))
"""

from __future__ import annotations

import functools
import itertools
import random
import time
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .algebra import (
    FactoredRational,
    Monomial,
    Polynomial,
    PoleAtPoint,
    SubsetFactor,
    packed_equal,
    fr_eval,
    first_difference,
    format_rational,
    times_differences,
)
from .parallel import map_ordered
from .permutation import Permutation, antisymmetrize, antisymmetrize_packed, enumerate_permutations, relabel

DEFAULT_MAX_SYMBOLIC_K = 5
DEFAULT_MAX_NUMERIC_K = 9
MAX_DENOMINATOR = 97


class BudgetExceeded(ValueError):
    pass


class DegeneratePointExhaustion(RuntimeError):
    pass


@dataclass
class VerificationReport:
    k: int
    mode: str
    equal: bool
    lhs_term_count: int
    numerator_monomials: int | None = None
    points_tested: int | None = None
    elapsed: float = 0.0
    witness: dict | None = None
    seed: int | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        extra = d.pop("extra")
        d.update(extra)
        return {key: v for key, v in d.items() if v is not None}


def base_term(k: int) -> FactoredRational:
    """The un-permuted summand: numerator prod x_i^i over suffix factors S_j = {k-j+1..k}."""
    if k < 1:
        raise ValueError("k must be >= 1")
    num = Polynomial._wrap({Monomial._raw(tuple((i, i) for i in range(1, k + 1))): 1})
    den = Counter({SubsetFactor(range(k - j + 1, k + 1)): 1 for j in range(1, k + 1)})
    return FactoredRational._wrap(num, den)


def lhs_term(k: int, pi: Permutation) -> FactoredRational:
    if len(pi) != k:
        raise ValueError(f"permutation of size {len(pi)} for k={k}")
    t = relabel(base_term(k), pi)
    return t if pi.sign() > 0 else -t


def build_lhs(k: int, workers: int = 1) -> FactoredRational:
    return antisymmetrize(base_term(k), k, workers=workers)


def rhs_numerator(k: int) -> Polynomial:
    """``x1...xk * prod_{i<j} (xj - xi)``, expanded."""
    p = Polynomial._wrap({Monomial._raw(tuple((i, 1) for i in range(1, k + 1))): 1})
    return times_differences(p, [(j, i) for i, j in itertools.combinations(range(1, k + 1), 2)])


@functools.lru_cache(maxsize=None)
def build_rhs(k: int) -> FactoredRational:
    if k < 1:
        raise ValueError("k must be >= 1")
    den = Counter({SubsetFactor([i]): 1 for i in range(1, k + 1)})
    for i, j in itertools.combinations(range(1, k + 1), 2):
        den[SubsetFactor([i, j])] = 1
    return FactoredRational._wrap(rhs_numerator(k), den)


def verify_symbolic(k: int, max_k: int = DEFAULT_MAX_SYMBOLIC_K, workers: int = 1) -> VerificationReport:
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > max_k:
        raise BudgetExceeded(f"symbolic verification of k={k} exceeds the budget k <= {max_k}")
    t0 = time.perf_counter()
    lhs = antisymmetrize_packed(base_term(k), k, workers=workers)
    rhs = build_rhs(k)
    equal = packed_equal(lhs, rhs)
    witness = None
    if not equal:
        m, c = first_difference(lhs.unpack(), rhs)
        witness = {"monomial": m.to_str(), "coefficient": format_rational(c)}
    return VerificationReport(
        k=k,
        mode="symbolic",
        equal=equal,
        lhs_term_count=_factorial(k),
        numerator_monomials=lhs.nterms(),
        elapsed=time.perf_counter() - t0,
        witness=witness,
        extra={"denominator_factors": sum(lhs.den.values())},
    )


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


# -- numeric -------------------------------------------------------------------


def sample_point(rng: random.Random, k: int) -> dict[int, Fraction]:
    """Coordinates n/d with 1 <= n < d <= 97."""
    out = {}
    for i in range(1, k + 1):
        d = rng.randint(2, MAX_DENOMINATOR)
        out[i] = Fraction(rng.randint(1, d - 1), d)
    return out


def _subset_values(k: int, point) -> tuple[list[int], list[int]]:
    # per bitmask S: (prod d - prod n) and prod d, so 1 - x^S = u/w
    nums = [Fraction(point[i]).numerator for i in range(1, k + 1)]
    dens = [Fraction(point[i]).denominator for i in range(1, k + 1)]
    pn = [1] * (1 << k)
    pd = [1] * (1 << k)
    for mask in range(1, 1 << k):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        pn[mask] = pn[rest] * nums[low]
        pd[mask] = pd[rest] * dens[low]
    return [pd[m] - pn[m] for m in range(1 << k)], nums


def has_pole(k: int, point) -> bool:
    """True if some factor ``1 - x^S`` (any nonempty S) vanishes at the point."""
    u, _ = _subset_values(k, point)
    return any(v == 0 for v in u[1:])


def lhs_value(k: int, point, start: int = 0, stop: int | None = None) -> Fraction:
    """Exact value of the left side (or a contiguous range of its terms) at a point.

    Equal to ``sum(fr_eval(lhs_term(k, pi), point))``. The products of the
    denominators d_i cancel between numerator and denominator of every term,
    leaving ``sign * prod n_{pi(i)}^i / prod_j u(S_j)`` with
    ``u(S) = prod_S d - prod_S n``; terms are summed over the common
    denominator ``prod_S u(S)``.
    """
    u, nums = _subset_values(k, point)
    if any(v == 0 for v in u[1:]):
        raise PoleAtPoint(f"a denominator factor vanishes at {point}")
    pows = [[n**e for e in range(k + 1)] for n in nums]
    total = 1
    for v in u[1:]:
        total *= v
    acc = 0
    for pi in enumerate_permutations(k, start, stop):
        mask = 0
        den = 1
        num = 1
        for pos in range(k, 0, -1):
            v = pi[pos - 1]
            mask |= 1 << (v - 1)
            den *= u[mask]
            num *= pows[v - 1][pos]
        term = num * (total // den)
        if pi.sign() > 0:
            acc += term
        else:
            acc -= term
    return Fraction(acc, total)


def _check_point(k: int, point) -> tuple[Fraction, Fraction]:
    return lhs_value(k, point), fr_eval(build_rhs(k), point)


def verify_numeric(
    k: int,
    trials: int = 20,
    seed: int = 0,
    max_k: int = DEFAULT_MAX_NUMERIC_K,
    workers: int = 1,
    sampler=sample_point,
) -> VerificationReport:
    if k < 1 or trials < 1:
        raise ValueError("need k >= 1 and trials >= 1")
    if k > max_k:
        raise BudgetExceeded(f"numeric verification of k={k} exceeds the budget k <= {max_k}")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    points = []
    rejected = 0
    while len(points) < trials:
        pt = sampler(rng, k)
        if has_pole(k, pt):
            rejected += 1
            if rejected > 100 * trials:
                raise DegeneratePointExhaustion(f"{rejected} sampled points hit a pole")
            continue
        points.append(pt)
    build_rhs(k)
    values = map_ordered(_check_point, [(k, pt) for pt in points], workers)
    witness = None
    for pt, (lv, rv) in zip(points, values):
        if lv != rv:
            witness = {
                "point": [format_rational(pt[i]) for i in range(1, k + 1)],
                "lhs": format_rational(lv),
                "rhs": format_rational(rv),
            }
            break
    return VerificationReport(
        k=k,
        mode="numeric",
        equal=witness is None,
        lhs_term_count=_factorial(k),
        points_tested=len(points),
        elapsed=time.perf_counter() - t0,
        witness=witness,
        seed=seed,
        extra={"rejected_points": rejected},
    )
