"""Specialization x_i := q**a_i, scaling by (1 - q)**k, and the exact q -> 1 limit.

Every factor ``1 - q**s`` is rewritten as ``(1 - q) * [s]_q`` with the
q-integer ``[s]_q = 1 + q + ... + q**(s-1)``; at q = 1 it equals s. Limits
are read off factor by factor, never by series expansion.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import format_rational
from .parallel import chunk_ranges, map_ordered
from .permutation import Permutation, enumerate_permutations


class LengthMismatch(ValueError):
    pass


class DivergentLimit(ArithmeticError):
    pass


@dataclass(frozen=True)
class ExponentVector:
    a: tuple[int, ...]

    def __post_init__(self):
        a = tuple(self.a)
        if not a:
            raise ValueError("exponent vector must be nonempty")
        for v in a:
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ValueError(f"exponents must be positive integers, got {v!r}")
        object.__setattr__(self, "a", a)

    @classmethod
    def parse(cls, text: str) -> "ExponentVector":
        """``"1,2,5"`` -> (1, 2, 5); order is kept."""
        parts = [p.strip() for p in text.split(",")]
        try:
            vals = [int(p, 10) for p in parts]
        except ValueError:
            raise ValueError(f"expected comma-separated positive integers, got {text!r}") from None
        return cls(tuple(vals))

    @property
    def k(self) -> int:
        return len(self.a)

    def distinct(self) -> bool:
        return len(set(self.a)) == len(self.a)

    def __len__(self):
        return len(self.a)

    def __iter__(self):
        return iter(self.a)

    def __str__(self):
        return ",".join(map(str, self.a))


def _vector(a) -> ExponentVector:
    return a if isinstance(a, ExponentVector) else ExponentVector(tuple(a))


def qint(s: int, q) -> Fraction:
    """``[s]_q`` at a rational q."""
    q = Fraction(q)
    return sum((q**e for e in range(s)), Fraction(0))


@dataclass(frozen=True)
class QFactorization:
    """``sign * scalar * q**q_power * (1-q)**one_minus_q_exponent * prod[s]_q / prod[t]_q``."""

    sign: int
    scalar: Fraction
    q_power: int
    numerator_qints: tuple[int, ...] = ()
    denominator_qints: tuple[int, ...] = ()
    one_minus_q_exponent: int = 0

    def times_one_minus_q(self, n: int) -> "QFactorization":
        return QFactorization(
            self.sign,
            self.scalar,
            self.q_power,
            self.numerator_qints,
            self.denominator_qints,
            self.one_minus_q_exponent + n,
        )

    def is_zero(self) -> bool:
        return self.scalar == 0

    def limit(self) -> Fraction:
        """Exact value at q -> 1."""
        if self.scalar == 0:
            return Fraction(0)
        if self.one_minus_q_exponent < 0:
            raise DivergentLimit(f"(1-q)^{self.one_minus_q_exponent} has no finite limit at q=1")
        if self.one_minus_q_exponent > 0:
            return Fraction(0)
        num = math.prod(self.numerator_qints)
        den = math.prod(self.denominator_qints)
        return self.sign * Fraction(self.scalar) * Fraction(num, den)

    def evaluate(self, q) -> Fraction:
        """Exact value at a rational q != 1."""
        q = Fraction(q)
        v = self.sign * Fraction(self.scalar) * q**self.q_power * (1 - q) ** self.one_minus_q_exponent
        for s in self.numerator_qints:
            v *= qint(s, q)
        for t in self.denominator_qints:
            v /= qint(t, q)
        return v

    def to_dict(self) -> dict:
        return {
            "sign": self.sign,
            "scalar": format_rational(self.scalar),
            "q_power": self.q_power,
            "numerator_qints": list(self.numerator_qints),
            "denominator_qints": list(self.denominator_qints),
            "one_minus_q_exponent": self.one_minus_q_exponent,
        }


def suffix_sums(pi: Permutation, a) -> list[int]:
    """``s_j = a_{pi(k)} + ... + a_{pi(k-j+1)}`` for j = 1..k."""
    out = []
    acc = 0
    for pos in range(len(pi), 0, -1):
        acc += a[pi[pos - 1] - 1]
        out.append(acc)
    return out


def qsubst_lhs_term(pi: Permutation, a) -> QFactorization:
    a = _vector(a)
    if len(pi) != a.k:
        raise LengthMismatch(f"permutation of size {len(pi)} with {a.k} exponents")
    k = a.k
    power = sum(i * a.a[pi[i - 1] - 1] for i in range(1, k + 1))
    return QFactorization(
        sign=pi.sign(),
        scalar=Fraction(1),
        q_power=power,
        denominator_qints=tuple(suffix_sums(pi, a.a)),
        one_minus_q_exponent=-k,
    )


def _lhs_range(a: ExponentVector, start: int, stop: int) -> Fraction:
    k = a.k
    total = Fraction(0)
    for pi in enumerate_permutations(k, start, stop):
        total += qsubst_lhs_term(pi, a).times_one_minus_q(k).limit()
    return total


def limit_lhs(a, workers: int = 1) -> Fraction:
    """Left side after x_i := q**a_i, times (1-q)**k, at q -> 1."""
    a = _vector(a)
    ranges = chunk_ranges(math.factorial(a.k), workers)
    parts = map_ordered(_lhs_range, [(a, lo, hi) for lo, hi in ranges], workers)
    return sum(parts, Fraction(0))


def qsubst_rhs(a) -> QFactorization:
    """Right side after x_i := q**a_i, every factor rewritten through q-integers.

    ``q**a_j - q**a_i = sign(a_i - a_j) * q**min(a_i, a_j) * (1-q) * [|a_i - a_j|]_q``.
    """
    a = _vector(a)
    k = a.k
    pairs = list(itertools.combinations(range(k), 2))
    if not a.distinct():
        return QFactorization(1, Fraction(0), 0, (), (), -k)
    sign = 1
    power = sum(a.a)
    num = []
    den = list(a.a)
    for i, j in pairs:
        ai, aj = a.a[i], a.a[j]
        if ai < aj:
            sign = -sign
        power += min(ai, aj)
        num.append(abs(ai - aj))
        den.append(ai + aj)
    return QFactorization(
        sign=sign,
        scalar=Fraction(1),
        q_power=power,
        numerator_qints=tuple(num),
        denominator_qints=tuple(den),
        one_minus_q_exponent=len(pairs) - k - len(pairs),
    )


def limit_rhs(a) -> Fraction:
    a = _vector(a)
    return qsubst_rhs(a).times_one_minus_q(a.k).limit()


@dataclass
class LimitReport:
    a: ExponentVector
    lhs_limit: Fraction
    rhs_limit: Fraction
    extra: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return self.a.k

    @property
    def equal(self) -> bool:
        return self.lhs_limit == self.rhs_limit

    def to_dict(self) -> dict:
        d = {
            "a": list(self.a.a),
            "k": self.k,
            "lhs_limit": format_rational(self.lhs_limit),
            "rhs_limit": format_rational(self.rhs_limit),
            "equal": self.equal,
        }
        d.update(self.extra)
        return d


def check_limit_identity(a, workers: int = 1) -> LimitReport:
    a = _vector(a)
    return LimitReport(a, limit_lhs(a, workers=workers), limit_rhs(a))


def scaled_value_near_one(expr_value, k: int, q0) -> Fraction:
    """``(1 - q0)**k * value``; used to watch the approach to the limit."""
    return (1 - Fraction(q0)) ** k * expr_value


def specialization_point(a, q0) -> dict[int, Fraction]:
    a = _vector(a)
    q0 = Fraction(q0)
    return {i: q0**e for i, e in enumerate(a.a, 1)}

