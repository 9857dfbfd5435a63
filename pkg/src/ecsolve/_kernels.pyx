# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled inner loops; see ``_kernels_py.py`` for the reference semantics."""

from cpython.list cimport PyList_GET_ITEM, PyList_GET_SIZE


def conv2d(list a, list b, Py_ssize_t nx, Py_ssize_t ny):
    cdef Py_ssize_t i, j, k, m, la, lb, lar, lbr, kmax, mmax
    cdef list out = [[0] * (ny + 1) for _ in range(nx + 1)]
    cdef list arow, brow, orow
    cdef object av, bv
    la = PyList_GET_SIZE(a)
    lb = PyList_GET_SIZE(b)
    if la > nx + 1:
        la = nx + 1
    for i in range(la):
        arow = <list>PyList_GET_ITEM(a, i)
        lar = PyList_GET_SIZE(arow)
        if lar > ny + 1:
            lar = ny + 1
        kmax = nx - i + 1
        if kmax > lb:
            kmax = lb
        for j in range(lar):
            av = <object>PyList_GET_ITEM(arow, j)
            if not av:
                continue
            mmax = ny - j + 1
            for k in range(kmax):
                brow = <list>PyList_GET_ITEM(b, k)
                orow = <list>PyList_GET_ITEM(out, i + k)
                lbr = PyList_GET_SIZE(brow)
                if lbr > mmax:
                    lbr = mmax
                for m in range(lbr):
                    bv = <object>PyList_GET_ITEM(brow, m)
                    if bv:
                        orow[j + m] = orow[j + m] + av * bv
    return out


def conv1d(list a, list b, Py_ssize_t n):
    cdef Py_ssize_t i, k, la, lb, kmax
    cdef list out = [0] * (n + 1)
    cdef object av, bv
    la = PyList_GET_SIZE(a)
    lb = PyList_GET_SIZE(b)
    if la > n + 1:
        la = n + 1
    for i in range(la):
        av = <object>PyList_GET_ITEM(a, i)
        if not av:
            continue
        kmax = n - i + 1
        if kmax > lb:
            kmax = lb
        for k in range(kmax):
            bv = <object>PyList_GET_ITEM(b, k)
            if bv:
                out[i + k] = out[i + k] + av * bv
    return out


def shift_accumulate(list acc, list v, list terms, Py_ssize_t nx):
    cdef Py_ssize_t t, x, y, ly
    cdef object c, sv
    cdef list src, dst
    for term in terms:
        t = term[0]
        c = term[1]
        for x in range(nx - t + 1):
            src = <list>PyList_GET_ITEM(v, x)
            dst = <list>PyList_GET_ITEM(acc, x + t)
            ly = PyList_GET_SIZE(src)
            for y in range(ly):
                sv = <object>PyList_GET_ITEM(src, y)
                if sv:
                    dst[y] = dst[y] + c * sv


def poly_mul(list a, list b):
    cdef Py_ssize_t i, k, la, lb
    cdef object av, bv
    la = PyList_GET_SIZE(a)
    lb = PyList_GET_SIZE(b)
    if la == 0 or lb == 0:
        return []
    cdef list out = [0] * (la + lb - 1)
    for i in range(la):
        av = <object>PyList_GET_ITEM(a, i)
        if not av:
            continue
        for k in range(lb):
            bv = <object>PyList_GET_ITEM(b, k)
            if bv:
                out[i + k] = out[i + k] + av * bv
    return out


def poly_divmod(list a, list b, object lead_inv):
    cdef list r = list(a)
    cdef Py_ssize_t db = PyList_GET_SIZE(b) - 1
    cdef Py_ssize_t lr = PyList_GET_SIZE(r)
    cdef Py_ssize_t i, k, off
    cdef object c, bk
    if lr <= db:
        return [], r
    cdef list q = [0] * (lr - db)
    for i in range(lr - 1, db - 1, -1):
        c = <object>PyList_GET_ITEM(r, i)
        if not c:
            continue
        c = c * lead_inv
        off = i - db
        q[off] = c
        for k in range(db):
            bk = <object>PyList_GET_ITEM(b, k)
            if bk:
                r[off + k] = r[off + k] - c * bk
        r[i] = 0
    return q, r[:db]


def fold(dict states, list table, Py_ssize_t plus_idx, Py_ssize_t minus_idx,
         Py_ssize_t q_idx, long qmax, tuple lo, tuple hi):
    cdef dict out = {}
    cdef Py_ssize_t nkey = len(lo)
    cdef Py_ssize_t i
    cdef long l, d, qq, base_q, v
    cdef bint ok
    cdef list nk
    cdef long[64] clo
    cdef long[64] chi
    if nkey > 64:
        raise ValueError("key too long")
    for i in range(nkey):
        clo[i] = lo[i]
        chi[i] = hi[i]
    for key, val in states.items():
        base_q = key[q_idx]
        for term in table:
            l = term[0]
            qq = base_q + l
            if qq > qmax:
                continue
            d = term[1]
            nk = list(key)
            nk[q_idx] = qq
            if plus_idx >= 0:
                nk[plus_idx] = <long>nk[plus_idx] + d
            if minus_idx >= 0:
                nk[minus_idx] = <long>nk[minus_idx] - d
            ok = True
            for i in range(nkey):
                v = nk[i]
                if v < clo[i] or v > chi[i]:
                    ok = False
                    break
            if not ok:
                continue
            t = tuple(nk)
            prod = val * term[2]
            prev = out.get(t)
            out[t] = prod if prev is None else prev + prod
    return out
