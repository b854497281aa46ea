"""Pure-Python kernels.

Sparse integer polynomials are dicts mapping a packed monomial key to a
nonzero Python int. Keys are nonnegative ints whose bit fields hold the
exponents, so multiplying by a monomial is adding its key.

The Monte Carlo kernel is vectorised with numpy and performs exactly the
same IEEE operations, in the same order, as the compiled kernel, so both
produce bit-identical sample values.
"""

from __future__ import annotations

import numpy as np

NAME = "python"

MASK64 = (1 << 64) - 1


def pack(terms):
    return dict(terms)


def unpack(p):
    return dict(p)


def nterms(p):
    return len(p)


def mul_binomials(p, shifts):
    """Return ``p * prod(1 - X**s for s in shifts)``."""
    for s in shifts:
        out = dict(p)
        get = out.get
        for key, c in p.items():
            nk = key + s
            v = get(nk, 0) - c
            if v:
                out[nk] = v
            else:
                del out[nk]
        p = out
    return p


def mul_shift_diff(p, splus, sminus):
    """Return ``(X**splus - X**sminus) * p``."""
    out = {key + splus: c for key, c in p.items()}
    get = out.get
    for key, c in p.items():
        nk = key + sminus
        v = get(nk, 0) - c
        if v:
            out[nk] = v
        else:
            del out[nk]
    return out


def mul(p, q):
    if len(p) < len(q):
        p, q = q, p
    out: dict[int, int] = {}
    get = out.get
    for kq, cq in q.items():
        for kp, cp in p.items():
            key = kp + kq
            out[key] = get(key, 0) + cp * cq
    return {key: c for key, c in out.items() if c}


def add(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = dict(p)
    get = out.get
    for key, c in q.items():
        v = get(key, 0) + c
        if v:
            out[key] = v
        else:
            del out[key]
    return out


def negate(p):
    return {key: -c for key, c in p.items()}


def equal(p, q):
    return p == q


# -- Monte Carlo -------------------------------------------------------------

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _splitmix64(x):
    # x: uint64 array of counters; wraps mod 2**64 by construction
    z = x * _GOLDEN + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def uniforms(seed, start, count, k):
    """Uniform [0, 1) doubles for samples ``start .. start+count-1``.

    Coordinate ``j`` of sample ``i`` is a pure function of
    ``(seed, i*k + j)``.
    """
    base = np.uint64((seed * 0x2545F4914F6CDD1D) & MASK64)
    idx = np.arange(start * k, (start + count) * k, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = _splitmix64(idx ^ base)
    u = (z >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)
    return u.reshape(count, k)


def _int_pow(t, e):
    r = np.ones_like(t)
    for _ in range(e):
        r = r * t
    return r


def _cofactor_det(m, rows, cols):
    # m: (n, k, k); expands along the first remaining row, left to right
    if len(rows) == 1:
        return m[:, rows[0], cols[0]]
    r0 = rows[0]
    rest = rows[1:]
    acc = None
    for pos, c in enumerate(cols):
        minor = _cofactor_det(m, rest, cols[:pos] + cols[pos + 1:])
        term = m[:, r0, c] * minor
        if acc is None:
            acc = term
        elif pos % 2:
            acc = acc - term
        else:
            acc = acc + term
    return acc


def _elim_det(m):
    m = m.copy()
    n, k, _ = m.shape
    det = np.ones(n)
    rows = np.arange(n)
    for c in range(k):
        piv = c + np.argmax(np.abs(m[:, c:, c]), axis=1)
        swap = piv != c
        if swap.any():
            a = m[rows, c, :].copy()
            m[rows, c, :] = m[rows, piv, :]
            m[rows, piv, :] = a
            det = np.where(swap, -det, det)
        d = m[:, c, c]
        det = det * d
        safe = np.where(d == 0.0, 1.0, d)
        for r in range(c + 1, k):
            f = m[:, r, c] / safe
            for j in range(c, k):
                m[:, r, j] = m[:, r, j] - f * m[:, c, j]
    return det


def det_samples(exps, seed, start, count, rational_exps=None):
    """Integrand ``det(t_i ** (a_j - 1))`` at ``count`` sorted uniform points.

    ``exps`` holds the integer exponents ``a_j - 1``. If ``rational_exps``
    (floats) is given it is used with ``pow`` instead.
    """
    k = len(exps)
    t = np.sort(uniforms(seed, start, count, k), axis=1)
    m = np.empty((count, k, k))
    for i in range(k):
        for j in range(k):
            if rational_exps is None:
                m[:, i, j] = _int_pow(t[:, i], exps[j])
            else:
                m[:, i, j] = np.power(t[:, i], rational_exps[j])
    if k <= 6:
        return _cofactor_det(m, list(range(k)), list(range(k)))
    return _elim_det(m)
