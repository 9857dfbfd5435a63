"""Pure-Python inner loops.

Every function here has a twin in ``_kernels.pyx`` with the same signature
and bit-identical results; ``ecsolve.kernels`` picks one at import time.
Entries are arbitrary exact scalars (ints, rationals, rational functions);
falsy entries are treated as zero and skipped.
"""

from __future__ import annotations


def conv2d(a, b, nx, ny):
    """Truncated Cauchy product of two dense 2-D coefficient grids.

    ``a`` and ``b`` are lists of rows (first index: x-power, second:
    y-power); rows may be shorter than ``ny + 1``.  Returns an
    ``(nx + 1) x (ny + 1)`` grid, dropping every term beyond the window.
    """
    out = [[0] * (ny + 1) for _ in range(nx + 1)]
    for i, arow in enumerate(a):
        if i > nx:
            break
        for j, av in enumerate(arow):
            if j > ny or not av:
                continue
            for k in range(min(len(b), nx - i + 1)):
                brow = b[k]
                orow = out[i + k]
                for m in range(min(len(brow), ny - j + 1)):
                    bv = brow[m]
                    if bv:
                        orow[j + m] = orow[j + m] + av * bv
    return out


def conv1d(a, b, n):
    out = [0] * (n + 1)
    for i, av in enumerate(a):
        if i > n:
            break
        if not av:
            continue
        for k in range(min(len(b), n - i + 1)):
            bv = b[k]
            if bv:
                out[i + k] = out[i + k] + av * bv
    return out


def shift_accumulate(acc, v, terms, nx):
    """``acc += (sum_t c_t x^t) * v`` in place, truncated at x-power ``nx``.

    ``terms`` is a list of ``(t, c)`` pairs with small integer ``c``.
    """
    for t, c in terms:
        for x in range(nx - t + 1):
            src = v[x]
            dst = acc[x + t]
            for y in range(len(src)):
                sv = src[y]
                if sv:
                    dst[y] = dst[y] + c * sv


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, av in enumerate(a):
        if not av:
            continue
        for k, bv in enumerate(b):
            if bv:
                out[i + k] = out[i + k] + av * bv
    return out


def poly_divmod(a, b, lead_inv):
    """Long division of coefficient lists (constant term first).

    ``lead_inv`` is the inverse of ``b``'s leading coefficient; ``b`` must
    have no trailing zeros.  The remainder keeps ``len(b) - 1`` slots.
    """
    r = list(a)
    db = len(b) - 1
    if len(r) <= db:
        return [], r
    q = [0] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if not c:
            continue
        c = c * lead_inv
        q[i - db] = c
        off = i - db
        for k in range(db):
            bk = b[k]
            if bk:
                r[off + k] = r[off + k] - c * bk
        r[i] = 0
    return q, r[:db]


def fold(states, table, plus_idx, minus_idx, q_idx, qmax, lo, hi):
    """Multiply a sparse multi-index series by a one-direction factor.

    ``states`` maps integer key tuples to coefficients; ``table`` holds
    ``(l, d, c)`` terms meaning ``c * q^(2l) * (monomial ratio)^d``.  Each
    term adds ``d`` at ``plus_idx``, subtracts ``d`` at ``minus_idx`` (either
    may be -1 for "none") and adds ``l`` at ``q_idx``.  Keys leaving the box
    ``lo <= key <= hi`` or exceeding ``qmax`` are dropped.
    """
    out = {}
    nkey = len(lo)
    for key, val in states.items():
        base_q = key[q_idx]
        for l, d, c in table:
            qq = base_q + l
            if qq > qmax:
                continue
            nk = list(key)
            nk[q_idx] = qq
            if plus_idx >= 0:
                nk[plus_idx] += d
            if minus_idx >= 0:
                nk[minus_idx] -= d
            ok = True
            for i in range(nkey):
                if nk[i] < lo[i] or nk[i] > hi[i]:
                    ok = False
                    break
            if not ok:
                continue
            t = tuple(nk)
            prev = out.get(t)
            prod = val * c
            out[t] = prod if prev is None else prev + prod
    return out
