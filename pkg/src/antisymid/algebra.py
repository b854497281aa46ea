"""Exact sparse multivariate polynomials and factored rational expressions.

Variables are ``x1, x2, ...`` indexed from 1. Coefficients are Python ints
or :class:`fractions.Fraction` (ints whenever integral). Denominators of a
:class:`FactoredRational` are multisets of factors ``1 - prod(x_i, i in S)``
and are never expanded into a single polynomial or gcd-reduced.

Integer-coefficient work is routed through the packed kernels in
:mod:`antisymid.backend`: numerators are multiplied by one binomial factor
``1 - x^S`` at a time, which is a shifted subtraction on packed keys.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable, Mapping
from fractions import Fraction
from types import MappingProxyType

from . import _kernels_py
from . import backend

Rational = Fraction


class AlgebraError(Exception):
    pass


class MissingAssignment(AlgebraError, KeyError):
    """A variable of the expression has no value at the evaluation point."""


class EmptySubset(AlgebraError, ValueError):
    pass


class PoleAtPoint(AlgebraError, ZeroDivisionError):
    """A denominator factor vanishes at the evaluation point."""


def _coeff(c):
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    raise TypeError(f"coefficients must be int or Fraction, not {type(c).__name__}")


def format_rational(q) -> str:
    """Lowest-terms ``p/q`` text with the sign on the numerator; integers print bare."""
    return str(Fraction(q))


class Monomial(tuple):
    """Sorted ``((index, exponent), ...)`` pairs with positive exponents."""

    __slots__ = ()

    def __new__(cls, exponents=()):
        items = exponents.items() if isinstance(exponents, Mapping) else exponents
        acc: dict[int, int] = {}
        for i, e in items:
            if not isinstance(i, int) or i < 1:
                raise ValueError(f"variable index must be a positive int, got {i!r}")
            if not isinstance(e, int) or e < 0:
                raise ValueError(f"exponent must be a nonnegative int, got {e!r}")
            acc[i] = acc.get(i, 0) + e
        return tuple.__new__(cls, sorted((i, e) for i, e in acc.items() if e))

    @classmethod
    def _raw(cls, pairs) -> "Monomial":
        return tuple.__new__(cls, pairs)

    @classmethod
    def from_dense(cls, exps: Iterable[int]) -> "Monomial":
        return tuple.__new__(cls, [(i, e) for i, e in enumerate(exps, 1) if e])

    def as_dict(self) -> dict[int, int]:
        return dict(self)

    @property
    def degree(self) -> int:
        return sum(e for _, e in self)

    @property
    def max_index(self) -> int:
        return self[-1][0] if self else 0

    def dense(self, n: int) -> tuple[int, ...]:
        out = [0] * n
        for i, e in self:
            out[i - 1] = e
        return tuple(out)

    def __mul__(self, other):
        if not isinstance(other, Monomial):
            return NotImplemented
        acc = dict(self)
        for i, e in other:
            acc[i] = acc.get(i, 0) + e
        return Monomial._raw(sorted(acc.items()))

    def to_str(self, var: str = "x") -> str:
        if not self:
            return "1"
        return "*".join(f"{var}{i}" if e == 1 else f"{var}{i}^{e}" for i, e in self)

    def __repr__(self):
        return f"Monomial({self.to_str()})"


ONE_MONOMIAL = Monomial()


def _grlex_key(m: Monomial):
    # descending graded lex: higher degree first, then larger exponent of x1, x2, ...
    return (-m.degree, tuple((i, -e) for i, e in m))


class Polynomial:
    """Immutable sparse polynomial with exact coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | None = None):
        out: dict[Monomial, object] = {}
        if terms:
            for m, c in terms.items():
                if not isinstance(m, Monomial):
                    m = Monomial(m)
                c = _coeff(c)
                v = out.get(m, 0) + c
                if v:
                    out[m] = _coeff(v)
                else:
                    out.pop(m, None)
        self._terms = out
        self._hash = None

    @classmethod
    def _wrap(cls, terms: dict) -> "Polynomial":
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c) -> "Polynomial":
        c = _coeff(c)
        return cls._wrap({ONE_MONOMIAL: c} if c else {})

    @classmethod
    def var(cls, i: int) -> "Polynomial":
        return cls._wrap({Monomial({i: 1}): 1})

    @classmethod
    def monomial(cls, m, c=1) -> "Polynomial":
        return cls({Monomial(m) if not isinstance(m, Monomial) else m: c})

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self._terms.values())

    @property
    def degree(self) -> int:
        return max((m.degree for m in self._terms), default=-1)

    @property
    def max_index(self) -> int:
        return max((m.max_index for m in self._terms), default=0)

    def variables(self) -> set[int]:
        return {i for m in self._terms for i, _ in m}

    def max_exponents(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for m in self._terms:
            for i, e in m:
                if e > out.get(i, 0):
                    out[i] = e
        return out

    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        return sorted(self._terms.items(), key=lambda t: _grlex_key(t[0]))

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.constant(other)
            except TypeError:
                return NotImplemented
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for m, c in b.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = _coeff(v)
            else:
                del out[m]
        return Polynomial._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = Polynomial.constant(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = _coeff(c)
        if not c:
            return Polynomial()
        return Polynomial._wrap({m: _coeff(v * c) for m, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            try:
                return self.scale(other)
            except TypeError:
                return NotImplemented
        if len(self._terms) * len(other._terms) > 64 and self.is_integral() and other.is_integral():
            return _mul_integral(self, other)
        out: dict[Monomial, object] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 * m2
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._wrap({m: _coeff(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        r = Polynomial.constant(1)
        for _ in range(n):
            r = r * self
        return r

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __reduce__(self):
        return (Polynomial._wrap, (self._terms,))

    def eval(self, point: Mapping[int, object]):
        return poly_eval(self, point)

    def to_str(self, var: str = "x") -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            neg = c < 0
            a = -c if neg else c
            if not m:
                body = format_rational(a)
            elif a == 1:
                body = m.to_str(var)
            else:
                body = f"{format_rational(a)}*{m.to_str(var)}"
            if not parts:
                parts.append("-" + body if neg else body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def _power_tables(point, need: dict[int, int]):
    tables = {}
    for i, e in need.items():
        if i not in point:
            raise MissingAssignment(i)
        v = Fraction(point[i])
        num = [1] * (e + 1)
        den = [1] * (e + 1)
        for j in range(1, e + 1):
            num[j] = num[j - 1] * v.numerator
            den[j] = den[j - 1] * v.denominator
        tables[i] = (num, den)
    return tables


def poly_eval(p: Polynomial, point: Mapping[int, object]) -> Fraction:
    """Exact value of ``p`` at a rational point ``{index: value}``.

    Works over the common denominator ``prod(d_i ** maxdeg_i)`` so the inner
    loop is integer arithmetic only.
    """
    if not p._terms:
        return Fraction(0)
    need = p.max_exponents()
    tables = _power_tables(point, need)
    total_den = 1
    for i, e in need.items():
        total_den *= tables[i][1][e]
    acc = 0
    frac_acc = Fraction(0)
    for m, c in p._terms.items():
        v = 1
        present = dict(m)
        for i, top in need.items():
            num, den = tables[i]
            e = present.get(i, 0)
            v *= num[e] * den[top - e]
        if type(c) is int:
            acc += c * v
        else:
            frac_acc += c * v
    return (Fraction(acc) + frac_acc) / total_den


class SubsetFactor:
    """The polynomial ``1 - prod(x_i for i in indices)``."""

    __slots__ = ("indices", "_key")

    def __init__(self, indices: Iterable[int]):
        s = frozenset(indices)
        if not s:
            raise EmptySubset("a denominator factor needs at least one variable")
        for i in s:
            if not isinstance(i, int) or i < 1:
                raise ValueError(f"variable index must be a positive int, got {i!r}")
        self.indices = s
        self._key = (len(s), tuple(sorted(s)))

    def __eq__(self, other):
        return isinstance(other, SubsetFactor) and self.indices == other.indices

    def __hash__(self):
        return hash(self.indices)

    def __lt__(self, other):
        return self._key < other._key

    def __reduce__(self):
        return (SubsetFactor, (tuple(sorted(self.indices)),))

    def expand(self) -> Polynomial:
        return factor_expand(self)

    def value(self, point: Mapping[int, object]) -> Fraction:
        v = Fraction(1)
        for i in self.indices:
            if i not in point:
                raise MissingAssignment(i)
            v *= Fraction(point[i])
        return 1 - v

    def to_str(self, var: str = "x") -> str:
        return "(1 - " + "*".join(f"{var}{i}" for i in self._key[1]) + ")"

    def __repr__(self):
        return f"SubsetFactor({set(self._key[1])})"


def factor_expand(f: SubsetFactor) -> Polynomial:
    if not f.indices:
        raise EmptySubset("empty factor")
    m = Monomial._raw(tuple((i, 1) for i in sorted(f.indices)))
    return Polynomial._wrap({ONE_MONOMIAL: 1, m: -1})


def _as_factor(f) -> SubsetFactor:
    return f if isinstance(f, SubsetFactor) else SubsetFactor(f)


class FactoredRational:
    """``numerator / prod(factor ** multiplicity)`` with a structural denominator.

    ``==`` compares representations; use :func:`fr_equal` for equality as
    rational functions.
    """

    __slots__ = ("numerator", "_den")

    def __init__(self, numerator, denominator: Mapping | Iterable | None = None):
        if not isinstance(numerator, Polynomial):
            numerator = Polynomial.constant(numerator)
        den: Counter = Counter()
        if denominator:
            items = denominator.items() if isinstance(denominator, Mapping) else ((f, 1) for f in denominator)
            for f, mult in items:
                if not isinstance(mult, int) or mult < 0:
                    raise ValueError(f"multiplicity must be a nonnegative int, got {mult!r}")
                if mult:
                    den[_as_factor(f)] += mult
        if numerator.is_zero():
            den = Counter()
        self.numerator = numerator
        self._den = den

    @classmethod
    def _wrap(cls, numerator: Polynomial, den: Counter) -> "FactoredRational":
        r = object.__new__(cls)
        r.numerator = numerator
        r._den = den if numerator._terms else Counter()
        return r

    @property
    def denominator(self) -> Mapping[SubsetFactor, int]:
        return MappingProxyType(self._den)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    @property
    def max_index(self) -> int:
        m = self.numerator.max_index
        for f in self._den:
            m = max(m, max(f.indices))
        return m

    def denominator_degree(self) -> int:
        return sum(len(f.indices) * c for f, c in self._den.items())

    def __neg__(self):
        return FactoredRational._wrap(-self.numerator, Counter(self._den))

    def scale(self, c) -> "FactoredRational":
        return FactoredRational._wrap(self.numerator.scale(c), Counter(self._den))

    def __add__(self, other):
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return fr_add(self, other)

    def __sub__(self, other):
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return fr_add(self, -other)

    def __eq__(self, other):
        if not isinstance(other, FactoredRational):
            return NotImplemented
        return self.numerator == other.numerator and self._den == other._den

    def __hash__(self):
        return hash((self.numerator, frozenset(self._den.items())))

    def __reduce__(self):
        return (FactoredRational._wrap, (self.numerator, self._den))

    def eval(self, point):
        return fr_eval(self, point)

    def to_str(self, var: str = "x") -> str:
        num = self.numerator.to_str(var)
        if not self._den:
            return num
        parts = []
        for f in sorted(self._den):
            c = self._den[f]
            parts.append(f.to_str(var) + (f"^{c}" if c > 1 else ""))
        return f"({num})/({'*'.join(parts)})"

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"FactoredRational({self.to_str()!r})"


# -- packed engine ------------------------------------------------------------


class _Packing:
    """Bit-field layout for monomials in ``x1..x_nvars``; x1 in the top field."""

    __slots__ = ("nvars", "bits", "_shift")

    def __init__(self, nvars: int, max_exp: int):
        self.nvars = max(nvars, 1)
        self.bits = max(int(max_exp).bit_length(), 1)
        self._shift = [self.bits * (self.nvars - i) for i in range(1, self.nvars + 1)]

    @property
    def width(self) -> int:
        return self.bits * self.nvars

    def __eq__(self, other):
        return isinstance(other, _Packing) and (self.nvars, self.bits) == (other.nvars, other.bits)

    def __hash__(self):
        return hash((self.nvars, self.bits))

    def __reduce__(self):
        return (_Packing, (self.nvars, (1 << self.bits) - 1))

    def key(self, m: Monomial) -> int:
        k = 0
        sh = self._shift
        for i, e in m:
            k += e << sh[i - 1]
        return k

    def subset_key(self, f: SubsetFactor) -> int:
        sh = self._shift
        return sum(1 << sh[i - 1] for i in f.indices)

    def monomial(self, key: int) -> Monomial:
        mask = (1 << self.bits) - 1
        pairs = []
        for i in range(self.nvars, 0, -1):
            e = key & mask
            if e:
                pairs.append((i, e))
            key >>= self.bits
        pairs.reverse()
        return Monomial._raw(tuple(pairs))

    def pack_terms(self, p: Polynomial) -> dict[int, int]:
        return {self.key(m): c for m, c in p._terms.items()}

    def unpack_terms(self, terms: dict[int, int]) -> Polynomial:
        mono = self.monomial
        return Polynomial._wrap({mono(k): c for k, c in terms.items()})


def packing_for(nvars: int, max_exp: int) -> _Packing:
    return _Packing(nvars, max_exp)


def _packing_for(items: Iterable[tuple[Polynomial, Counter]]) -> _Packing:
    """A layout wide enough for every numerator times every extra factor."""
    items = list(items)
    nvars = 1
    top: Counter = Counter()
    num_max = 0
    for num, den in items:
        nvars = max(nvars, num.max_index)
        for e in num.max_exponents().values():
            num_max = max(num_max, e)
        for f, c in den.items():
            if top[f] < c:
                top[f] = c
    per_var: Counter = Counter()
    for f, c in top.items():
        for i in f.indices:
            per_var[i] += c
            nvars = max(nvars, i)
    bound = num_max + max(per_var.values(), default=0)
    return _Packing(nvars, bound)


def _shifts(packing: _Packing, extra: Counter) -> list[int]:
    out = []
    for f in sorted(extra):
        out.extend([packing.subset_key(f)] * extra[f])
    return out


def _run_packed(fn, *args):
    """Run ``fn(kernels, ...)`` on the active backend, falling back on overflow."""
    kern = backend.get()
    try:
        return fn(kern, *args)
    except OverflowError:
        if kern is _kernels_py:
            raise
        return fn(_kernels_py, *args)


class PackedSum:
    """A factored rational whose numerator stays in a kernel's packed form.

    Large intermediate numerators never become :class:`Polynomial` objects;
    only :meth:`unpack` builds one.
    """

    __slots__ = ("packing", "kname", "num", "den")

    def __init__(self, packing: _Packing, kname: str, num, den: Counter):
        self.packing = packing
        self.kname = kname
        self.num = num
        self.den = den

    @property
    def kern(self):
        return backend.BACKENDS[self.kname]

    def nterms(self) -> int:
        return self.kern.nterms(self.num)

    def to_python(self) -> "PackedSum":
        if self.kname == _kernels_py.NAME:
            return self
        return PackedSum(self.packing, _kernels_py.NAME, self.kern.unpack(self.num), self.den)

    def unpack(self) -> FactoredRational:
        return FactoredRational._wrap(self.packing.unpack_terms(self.kern.unpack(self.num)), Counter(self.den))

    def max_exponents(self) -> dict[int, int]:
        out: dict[int, int] = {}
        mask = (1 << self.packing.bits) - 1
        keys = self.kern.unpack(self.num).keys() if self.kname == _kernels_py.NAME else self.num[0].tolist()
        for key in keys:
            for i in range(self.packing.nvars, 0, -1):
                e = key & mask
                if e > out.get(i, 0):
                    out[i] = e
                key >>= self.packing.bits
        return out

    def __reduce__(self):
        return (PackedSum, (self.packing, self.kname, self.num, self.den))


def _sum_level(kern, packing: _Packing, level: list) -> tuple:
    if not level:
        return kern.pack({}), Counter()
    while len(level) > 1:
        nxt = []
        for j in range(0, len(level) - 1, 2):
            nxt.append(_add_pair(kern, packing, level[j], level[j + 1]))
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]


def _sum_items(kern, packing: _Packing, items: list[tuple[Polynomial, Counter]]) -> PackedSum:
    level = [(kern.pack(packing.pack_terms(n)), Counter(d)) for n, d in items if not n.is_zero()]
    num, den = _sum_level(kern, packing, level)
    return PackedSum(packing, kern.NAME, num, den)


def _add_pair(kern, packing, a, b):
    (na, da), (nb, db) = a, b
    common = da | db
    na = kern.mul_binomials(na, _shifts(packing, common - da))
    nb = kern.mul_binomials(nb, _shifts(packing, common - db))
    num = kern.add(na, nb)
    if not kern.nterms(num):
        return num, Counter()
    return num, common


def fr_sum_packed(items: Iterable[FactoredRational], packing: _Packing | None = None) -> PackedSum:
    """Sum integer-coefficient expressions, keeping the result packed."""
    pairs = [(x.numerator, x._den) for x in items if not x.is_zero()]
    if not all(n.is_integral() for n, _ in pairs):
        raise ValueError("packed summation needs integer coefficients")
    if packing is None:
        packing = _packing_for(pairs)
    return _run_packed(_sum_items, packing, pairs)


def combine_packed(parts: list[PackedSum]) -> PackedSum:
    """Sum of partial sums that share one packing."""
    if not parts:
        raise ValueError("nothing to combine")
    packing = parts[0].packing
    if len(parts) == 1:
        return parts[0]
    if len({p.kname for p in parts}) > 1:
        parts = [p.to_python() for p in parts]

    def run(kern):
        if kern.NAME != parts[0].kname:
            level = [(kern.pack(p.kern.unpack(p.num)), Counter(p.den)) for p in parts]
        else:
            level = [(p.num, Counter(p.den)) for p in parts]
        num, den = _sum_level(kern, packing, level)
        return PackedSum(packing, kern.NAME, num, den)

    kern = parts[0].kern
    try:
        return run(kern)
    except OverflowError:
        if kern is _kernels_py:
            raise
        return run(_kernels_py)


def packed_equal(a: PackedSum, b: FactoredRational) -> bool:
    """Cross-multiplication equality of a packed sum with an expression."""
    if not b.numerator.is_integral():
        return fr_equal(a.unpack(), b)
    common = a.den & b._den
    only_a, only_b = a.den - common, b._den - common
    need: Counter = Counter()
    for f, c in only_b.items():
        for i in f.indices:
            need[i] += c
    for i, e in a.max_exponents().items():
        need[i] += e
    other: Counter = Counter()
    for f, c in only_a.items():
        for i in f.indices:
            other[i] += c
    for i, e in b.numerator.max_exponents().items():
        other[i] += e
    bound = max(list(need.values()) + list(other.values()) + [0])
    nvars = max([a.packing.nvars, b.max_index, *need.keys(), *other.keys()])
    if bound >= 1 << a.packing.bits or nvars > a.packing.nvars:
        return fr_equal(a.unpack(), b)
    packing = a.packing

    def run(kern):
        left = a.num if kern.NAME == a.kname else kern.pack(a.kern.unpack(a.num))
        left = kern.mul_binomials(left, _shifts(packing, only_b))
        right = kern.mul_binomials(kern.pack(packing.pack_terms(b.numerator)), _shifts(packing, only_a))
        return kern.equal(left, right)

    kern = a.kern
    try:
        return run(kern)
    except OverflowError:
        if kern is _kernels_py:
            raise
        return run(_kernels_py)


def _mul_integral(p: Polynomial, q: Polynomial) -> Polynomial:
    ep, eq = p.max_exponents(), q.max_exponents()
    bound = max(ep.get(i, 0) + eq.get(i, 0) for i in ep.keys() | eq.keys()) if ep or eq else 0
    packing = _Packing(max(p.max_index, q.max_index), bound)

    def run(kern):
        return kern.unpack(kern.mul(kern.pack(packing.pack_terms(p)), kern.pack(packing.pack_terms(q))))

    return packing.unpack_terms(_run_packed(run))


def times_differences(p: Polynomial, pairs: Iterable[tuple[int, int]]) -> Polynomial:
    """``p * prod(x_j - x_i for (j, i) in pairs)`` for integer-coefficient ``p``."""
    pairs = list(pairs)
    if not p.is_integral():
        for j, i in pairs:
            p = p * (Polynomial.var(j) - Polynomial.var(i))
        return p
    per_var = Counter(p.max_exponents())
    for j, i in pairs:
        per_var[i] += 1
        per_var[j] += 1
    nvars = max(per_var, default=1)
    packing = _Packing(nvars, max(per_var.values(), default=0))
    unit = [packing.subset_key(SubsetFactor([i])) for i in range(1, nvars + 1)]

    def run(kern):
        acc = kern.pack(packing.pack_terms(p))
        for j, i in pairs:
            acc = kern.mul_shift_diff(acc, unit[j - 1], unit[i - 1])
        return kern.unpack(acc)

    return packing.unpack_terms(_run_packed(run))


def _expand_product(p: Polynomial, factors: Counter) -> Polynomial:
    for f in sorted(factors):
        e = factor_expand(f)
        for _ in range(factors[f]):
            p = p * e
    return p


def fr_sum(items: Iterable[FactoredRational]) -> FactoredRational:
    """Sum with balanced pairwise :func:`fr_add` steps.

    The result is canonical: it does not depend on the order of ``items``.
    """
    items = [x for x in items if not x.is_zero()]
    if not items:
        return FactoredRational(Polynomial())
    if len(items) == 1:
        return items[0]
    if all(x.numerator.is_integral() for x in items):
        return fr_sum_packed(items).unpack()
    acc = items[0]
    for x in items[1:]:
        acc = _fr_add_generic(acc, x)
    return acc


def _fr_add_generic(a: FactoredRational, b: FactoredRational) -> FactoredRational:
    common = a._den | b._den
    num = _expand_product(a.numerator, common - a._den) + _expand_product(b.numerator, common - b._den)
    return FactoredRational._wrap(num, common)


def fr_add(a: FactoredRational, b: FactoredRational) -> FactoredRational:
    """Sum over the multiset-maximum denominator; no gcd reduction."""
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    return fr_sum([a, b])


def fr_eval(a: FactoredRational, point: Mapping[int, object]) -> Fraction:
    den = Fraction(1)
    for f, c in a._den.items():
        v = f.value(point)
        if v == 0:
            raise PoleAtPoint(f"factor {f.to_str()} vanishes at {dict(point)}")
        den *= v ** c
    return poly_eval(a.numerator, point) / den


def _cross_terms(a: FactoredRational, b: FactoredRational):
    common = a._den & b._den
    return a._den - common, b._den - common


def _equal_packed(kern, packing, a, b, only_a, only_b):
    left = kern.mul_binomials(kern.pack(packing.pack_terms(a.numerator)), _shifts(packing, only_b))
    right = kern.mul_binomials(kern.pack(packing.pack_terms(b.numerator)), _shifts(packing, only_a))
    return kern.equal(left, right)


def cross_multiplied(a: FactoredRational, b: FactoredRational) -> tuple[Polynomial, Polynomial]:
    """``(num_a * den_b', num_b * den_a')`` with the shared factors cancelled."""
    only_a, only_b = _cross_terms(a, b)
    return _expand_product(a.numerator, only_b), _expand_product(b.numerator, only_a)


def fr_equal(a: FactoredRational, b: FactoredRational) -> bool:
    """Equality as rational functions, by cross-multiplication."""
    only_a, only_b = _cross_terms(a, b)
    if a.numerator.is_integral() and b.numerator.is_integral():
        packing = _packing_for([(a.numerator, only_b), (b.numerator, only_a)])
        return _run_packed(_equal_packed, packing, a, b, only_a, only_b)
    left, right = cross_multiplied(a, b)
    return left == right


def first_difference(a: FactoredRational, b: FactoredRational):
    """The leading (graded lex) monomial where the cross-multiplied numerators differ."""
    left, right = cross_multiplied(a, b)
    diff = left - right
    if diff.is_zero():
        return None
    m, c = diff.sorted_terms()[0]
    return m, c
