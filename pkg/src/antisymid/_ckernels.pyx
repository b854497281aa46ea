# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.

Sparse integer polynomials are pairs of int64 arrays ``(keys, coeffs)``
with keys strictly increasing. Coefficient overflow raises
``OverflowError``; callers redo the computation with the Python kernels.
"""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libc.math cimport fabs

cnp.import_array()

cdef extern from *:
    """
    static inline int add_ovf(long long a, long long b, long long *r) {
        return __builtin_saddll_overflow(a, b, r);
    }
    static inline int sub_ovf(long long a, long long b, long long *r) {
        return __builtin_ssubll_overflow(a, b, r);
    }
    static inline int mul_ovf(long long a, long long b, long long *r) {
        return __builtin_smulll_overflow(a, b, r);
    }
    """
    int add_ovf(long long a, long long b, long long *r) nogil
    int sub_ovf(long long a, long long b, long long *r) nogil
    int mul_ovf(long long a, long long b, long long *r) nogil

NAME = "cython"

cdef int64_t KEY_MAX = 0x7FFFFFFFFFFFFFFF


def pack(terms):
    n = len(terms)
    keys = np.fromiter(terms.keys(), dtype=np.int64, count=n)
    coeffs = np.fromiter(terms.values(), dtype=np.int64, count=n)
    order = np.argsort(keys, kind="stable")
    return keys[order], coeffs[order]


def unpack(p):
    keys, coeffs = p
    return dict(zip(keys.tolist(), coeffs.tolist()))


def nterms(p):
    return p[0].shape[0]


cdef Py_ssize_t _merge(const int64_t[:] ak, const int64_t[:] ac,
                       const int64_t[:] bk, const int64_t[:] bc,
                       int64_t ashift, int64_t shift, int subtract,
                       int64_t[:] ok, int64_t[:] oc) except -1 nogil:
    # out = X**ashift * a + sign * X**shift * b, keys sorted, zeros dropped
    cdef Py_ssize_t i = 0, j = 0, n = 0
    cdef Py_ssize_t na = ak.shape[0], nb = bk.shape[0]
    cdef int64_t ka = 0, kb = 0
    cdef long long v
    cdef int bad
    while i < na or j < nb:
        if j < nb:
            if bk[j] > KEY_MAX - shift:
                with gil:
                    raise OverflowError("packed key overflow")
            kb = bk[j] + shift
        if i < na:
            if ak[i] > KEY_MAX - ashift:
                with gil:
                    raise OverflowError("packed key overflow")
            ka = ak[i] + ashift
        if j >= nb or (i < na and ka < kb):
            ok[n] = ka
            oc[n] = ac[i]
            n += 1
            i += 1
            continue
        if i >= na or kb < ka:
            if subtract:
                bad = sub_ovf(0, bc[j], &v)
            else:
                v = bc[j]
                bad = 0
            if bad:
                with gil:
                    raise OverflowError("coefficient overflow")
            ok[n] = kb
            oc[n] = v
            n += 1
            j += 1
            continue
        if subtract:
            bad = sub_ovf(ac[i], bc[j], &v)
        else:
            bad = add_ovf(ac[i], bc[j], &v)
        if bad:
            with gil:
                raise OverflowError("coefficient overflow")
        if v != 0:
            ok[n] = ka
            oc[n] = v
            n += 1
        i += 1
        j += 1
    return n


def mul_binomials(p, shifts):
    """Return ``p * prod(1 - X**s for s in shifts)``."""
    keys, coeffs = p
    cdef Py_ssize_t n
    for s in shifts:
        n = keys.shape[0]
        ok = np.empty(2 * n, dtype=np.int64)
        oc = np.empty(2 * n, dtype=np.int64)
        n = _merge(keys, coeffs, keys, coeffs, 0, <int64_t>s, 1, ok, oc)
        keys, coeffs = ok[:n], oc[:n]
    return keys, coeffs


def mul_shift_diff(p, splus, sminus):
    """Return ``(X**splus - X**sminus) * p``."""
    keys, coeffs = p
    cdef Py_ssize_t n = keys.shape[0]
    ok = np.empty(2 * n, dtype=np.int64)
    oc = np.empty(2 * n, dtype=np.int64)
    n = _merge(keys, coeffs, keys, coeffs, <int64_t>splus, <int64_t>sminus, 1, ok, oc)
    return ok[:n], oc[:n]


def mul(p, q):
    """Sparse product: all pairwise terms, sorted, equal keys combined."""
    cdef const int64_t[:] ak = p[0]
    cdef const int64_t[:] ac = p[1]
    cdef const int64_t[:] bk = q[0]
    cdef const int64_t[:] bc = q[1]
    cdef Py_ssize_t na = ak.shape[0], nb = bk.shape[0], i, j, w = 0
    pk = np.empty(na * nb, dtype=np.int64)
    pc = np.empty(na * nb, dtype=np.int64)
    cdef int64_t[:] pkv = pk
    cdef int64_t[:] pcv = pc
    cdef long long v
    with nogil:
        for i in range(na):
            for j in range(nb):
                if bk[j] > KEY_MAX - ak[i] or mul_ovf(ac[i], bc[j], &v):
                    with gil:
                        raise OverflowError("product overflow")
                pkv[w] = ak[i] + bk[j]
                pcv[w] = v
                w += 1
    order = np.argsort(pk, kind="stable")
    pk = pk[order]
    pc = pc[order]
    pkv = pk
    pcv = pc
    ok = np.empty(w, dtype=np.int64)
    oc = np.empty(w, dtype=np.int64)
    cdef int64_t[:] okv = ok
    cdef int64_t[:] ocv = oc
    cdef Py_ssize_t n = 0, r = 0
    cdef long long acc
    with nogil:
        while r < w:
            acc = pcv[r]
            j = r + 1
            while j < w and pkv[j] == pkv[r]:
                if add_ovf(acc, pcv[j], &acc):
                    with gil:
                        raise OverflowError("coefficient overflow")
                j += 1
            if acc != 0:
                okv[n] = pkv[r]
                ocv[n] = acc
                n += 1
            r = j
    return ok[:n], oc[:n]


def add(p, q):
    cdef Py_ssize_t n = p[0].shape[0] + q[0].shape[0]
    ok = np.empty(n, dtype=np.int64)
    oc = np.empty(n, dtype=np.int64)
    n = _merge(p[0], p[1], q[0], q[1], 0, 0, 0, ok, oc)
    return ok[:n], oc[:n]


def negate(p):
    keys, coeffs = p
    if coeffs.shape[0] and coeffs.min() == np.iinfo(np.int64).min:
        raise OverflowError("coefficient overflow")
    return keys, -coeffs


def equal(p, q):
    return np.array_equal(p[0], q[0]) and np.array_equal(p[1], q[1])


# -- Monte Carlo -------------------------------------------------------------

cdef inline uint64_t _splitmix64(uint64_t x) nogil:
    cdef uint64_t z = x * <uint64_t>0x9E3779B97F4A7C15ULL + <uint64_t>0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef double _cofactor(double *m, int k, int *rows, int nr, int *cols) noexcept nogil:
    cdef int pos, c, q, w
    cdef int sub[16]
    cdef double acc = 0.0, term, minor
    if nr == 1:
        return m[rows[0] * k + cols[0]]
    for pos in range(nr):
        w = 0
        for q in range(nr):
            if q != pos:
                sub[w] = cols[q]
                w += 1
        minor = _cofactor(m, k, rows + 1, nr - 1, sub)
        term = m[rows[0] * k + cols[pos]] * minor
        if pos == 0:
            acc = term
        elif pos % 2:
            acc = acc - term
        else:
            acc = acc + term
    return acc


cdef double _elim(double *m, int k) noexcept nogil:
    cdef int c, r, j, piv
    cdef double det = 1.0, d, f, safe, best, tmp
    for c in range(k):
        piv = c
        best = fabs(m[c * k + c])
        for r in range(c + 1, k):
            if fabs(m[r * k + c]) > best:
                best = fabs(m[r * k + c])
                piv = r
        if piv != c:
            for j in range(k):
                tmp = m[c * k + j]
                m[c * k + j] = m[piv * k + j]
                m[piv * k + j] = tmp
            det = -det
        d = m[c * k + c]
        det = det * d
        safe = 1.0 if d == 0.0 else d
        for r in range(c + 1, k):
            f = m[r * k + c] / safe
            for j in range(c, k):
                m[r * k + j] = m[r * k + j] - f * m[c * k + j]
    return det


def det_samples(exps, seed, start, count, rational_exps=None):
    """Integrand ``det(t_i ** (a_j - 1))`` at ``count`` sorted uniform points.

    Rational exponents take their powers from numpy so that the values match
    the pure-Python kernel bit for bit.
    """
    cdef int k = len(exps)
    if k > 16:
        raise ValueError("k > 16 not supported by the compiled kernel")
    cdef uint64_t base = <uint64_t>((seed * 0x2545F4914F6CDD1D) & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t s, c0 = start, cnt = count
    cdef int i, j, e
    cdef int use_pow = rational_exps is not None
    cdef int iexp[16]
    cdef double m[256]
    cdef int rows[16]
    cdef int cols[16]
    cdef double x, r
    cdef uint64_t z
    tarr = np.empty((cnt, k), dtype=np.float64)
    cdef double[:, ::1] tv = tarr
    for j in range(k):
        iexp[j] = exps[j]
        rows[j] = j
        cols[j] = j
    with nogil:
        for s in range(cnt):
            for j in range(k):
                z = _splitmix64(<uint64_t>((c0 + s) * k + j) ^ base)
                tv[s, j] = <double>(z >> 11) * (1.0 / 9007199254740992.0)
            # insertion sort, ascending
            for i in range(1, k):
                x = tv[s, i]
                j = i - 1
                while j >= 0 and tv[s, j] > x:
                    tv[s, j + 1] = tv[s, j]
                    j -= 1
                tv[s, j + 1] = x
    parr = np.empty((cnt if use_pow else 1, k, k), dtype=np.float64)
    if use_pow:
        for i in range(k):
            for j in range(k):
                parr[:, i, j] = np.power(tarr[:, i], float(rational_exps[j]))
    cdef double[:, :, ::1] pv = parr
    out = np.empty(cnt, dtype=np.float64)
    cdef double[:] ov = out
    with nogil:
        for s in range(cnt):
            for i in range(k):
                for j in range(k):
                    if use_pow:
                        m[i * k + j] = pv[s, i, j]
                    else:
                        r = 1.0
                        for e in range(iexp[j]):
                            r = r * tv[s, i]
                        m[i * k + j] = r
            if k <= 6:
                ov[s] = _cofactor(m, k, rows, k, cols)
            else:
                ov[s] = _elim(m, k)
    return out
