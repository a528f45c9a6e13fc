"""Pure-Python column reduction, the fallback for the compiled kernel.

Columns are pairs ``(rows, vals)`` with strictly increasing row indices and
nonzero integer values.  The reduction is the persistence-style left-to-right
sweep: a column is cleared against earlier columns sharing its lowest row,
using fraction-free integer combinations so that ``R = D V`` holds exactly
over the integers up to the per-column scaling recorded in ``V``.
"""

from math import gcd

__all__ = ["reduce_columns"]


def _content(r, v):
    g = 0
    for x in r.values():
        g = gcd(g, x)
        if g == 1:
            return 1
    for x in v.values():
        g = gcd(g, x)
        if g == 1:
            return 1
    return g


def reduce_columns(cols, track=True):
    """Reduce integer columns left to right.

    Args:
        cols: list of ``(rows, vals)`` sparse integer columns.
        track: whether to record the change-of-basis columns ``V``.

    Returns:
        ``(R, V, lows)`` where ``R`` and ``V`` are lists of sparse columns in
        the input format (``V`` is ``None`` when not tracked) and ``lows[j]``
        is the largest row index of ``R[j]`` or ``-1`` when it vanishes.
    """
    pivot_of = {}
    R = []
    V = [] if track else None
    lows = []
    for j, (rows, vals) in enumerate(cols):
        r = dict(zip(rows, vals))
        v = {j: 1} if track else {}
        low = max(r) if r else -1
        while low >= 0 and low in pivot_of:
            k = pivot_of[low]
            rk = R[k]
            a = rk[low]
            b = r[low]
            g = gcd(a, b)
            a //= g
            b //= g
            if a != 1:
                for key in r:
                    r[key] *= a
                for key in v:
                    v[key] *= a
            for key, x in rk.items():
                y = r.get(key, 0) - b * x
                if y:
                    r[key] = y
                else:
                    del r[key]
            if track:
                for key, x in V[k].items():
                    y = v.get(key, 0) - b * x
                    if y:
                        v[key] = y
                    else:
                        del v[key]
            c = _content(r, v)
            if c > 1:
                for key in r:
                    r[key] //= c
                for key in v:
                    v[key] //= c
            low = max(r) if r else -1
        if low >= 0:
            if r[low] < 0:
                for key in r:
                    r[key] = -r[key]
                for key in v:
                    v[key] = -v[key]
            pivot_of[low] = j
        R.append(r)
        if track:
            V.append(v)
        lows.append(low)
    out_r = [_pack(r) for r in R]
    out_v = [_pack(v) for v in V] if track else None
    return out_r, out_v, lows


def _pack(d):
    keys = sorted(d)
    return keys, [d[k] for k in keys]
