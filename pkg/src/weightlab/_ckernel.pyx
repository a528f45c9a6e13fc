# distutils: language = c++
"""Compiled column reduction with int64 arithmetic and overflow detection.

Same contract as the pure-Python kernel; raises ``OverflowError`` as soon as
an intermediate leaves the int64 range so the caller can fall back to
arbitrary precision.
"""

from libcpp.vector cimport vector
from libc.stdint cimport int64_t

cdef extern from *:
    """
    static inline int wl_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int wl_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int wl_mul(long long a, long long b, long long *r) nogil
    int wl_sub(long long a, long long b, long long *r) nogil


cdef struct Col:
    vector[long long] rows
    vector[long long] vals


cdef inline long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef int _combine(Col* x, long long a, Col* y, long long b, Col* out) except -1:
    """out = a*x - b*y with sorted merge; returns -1 on overflow."""
    cdef size_t i = 0, j = 0
    cdef size_t nx = x.rows.size(), ny = y.rows.size()
    cdef long long p, q, val
    out.rows.clear()
    out.vals.clear()
    while i < nx or j < ny:
        if j >= ny or (i < nx and x.rows[i] < y.rows[j]):
            if wl_mul(a, x.vals[i], &val):
                raise OverflowError("int64 overflow in column reduction")
            out.rows.push_back(x.rows[i])
            out.vals.push_back(val)
            i += 1
        elif i >= nx or y.rows[j] < x.rows[i]:
            if wl_mul(b, y.vals[j], &q):
                raise OverflowError("int64 overflow in column reduction")
            if q == (-9223372036854775807LL - 1):
                raise OverflowError("int64 overflow in column reduction")
            out.rows.push_back(y.rows[j])
            out.vals.push_back(-q)
            j += 1
        else:
            if wl_mul(a, x.vals[i], &p) or wl_mul(b, y.vals[j], &q) or wl_sub(p, q, &val):
                raise OverflowError("int64 overflow in column reduction")
            if val != 0:
                out.rows.push_back(x.rows[i])
                out.vals.push_back(val)
            i += 1
            j += 1
    return 0


cdef Col _from_py(object rows, object vals) except *:
    cdef Col c
    for r in rows:
        c.rows.push_back(r)
    for v in vals:
        c.vals.push_back(v)
    return c


cdef tuple _to_py(Col* c):
    return ([c.rows[i] for i in range(c.rows.size())],
            [c.vals[i] for i in range(c.vals.size())])


def reduce_columns(cols, bint track=True):
    """Reduce integer columns left to right (see the pure-Python twin)."""
    cdef Py_ssize_t n = len(cols)
    cdef vector[Col] R
    cdef vector[Col] V
    cdef vector[long long] lows
    cdef dict pivot_of = {}
    cdef Col r, v, tmp
    cdef long long low, a, b, g, c
    cdef size_t i
    cdef Py_ssize_t j, k
    R.reserve(n)
    if track:
        V.reserve(n)
    for j in range(n):
        rows, vals = cols[j]
        r = _from_py(rows, vals)
        v.rows.clear()
        v.vals.clear()
        if track:
            v.rows.push_back(j)
            v.vals.push_back(1)
        low = r.rows.back() if r.rows.size() else -1
        while low >= 0:
            obj = pivot_of.get(low)
            if obj is None:
                break
            k = obj
            a = R[k].vals.back()
            b = r.vals.back()
            g = _gcd(a, b)
            a //= g
            b //= g
            _combine(&r, a, &R[k], b, &tmp)
            r.rows.swap(tmp.rows)
            r.vals.swap(tmp.vals)
            if track:
                _combine(&v, a, &V[k], b, &tmp)
                v.rows.swap(tmp.rows)
                v.vals.swap(tmp.vals)
            c = 0
            for i in range(r.vals.size()):
                c = _gcd(c, r.vals[i])
                if c == 1:
                    break
            if c != 1 and track:
                for i in range(v.vals.size()):
                    c = _gcd(c, v.vals[i])
                    if c == 1:
                        break
            if c > 1:
                for i in range(r.vals.size()):
                    r.vals[i] //= c
                for i in range(v.vals.size()):
                    v.vals[i] //= c
            low = r.rows.back() if r.rows.size() else -1
        if low >= 0:
            if r.vals.back() < 0:
                for i in range(r.vals.size()):
                    r.vals[i] = -r.vals[i]
                for i in range(v.vals.size()):
                    v.vals[i] = -v.vals[i]
            pivot_of[low] = j
        R.push_back(r)
        if track:
            V.push_back(v)
        lows.push_back(low)
    out_r = [_to_py(&R[j]) for j in range(n)]
    out_v = [_to_py(&V[j]) for j in range(n)] if track else None
    return out_r, out_v, [lows[j] for j in range(n)]
