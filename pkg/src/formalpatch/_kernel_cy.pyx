# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
"""Compiled hot kernel: the bit-for-bit twin of _kernel_py.

Same flat representation, same functions, same results — the only
difference is speed.  Coefficients and exponents stay Python objects so
exact arithmetic is untouched; the win comes from typed tuple access
and C loop counters.  Arguments are typed as tuples, which is exactly
what the documented representation guarantees.  See _kernel_py for the
representation notes."""

from fractions import Fraction

EXP_LIMIT = 1 << 60


def mono_one(nvars):
    return (0,) * nvars


def mono_mul(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    out = []
    for i in range(n):
        s = a[i] + b[i]
        if s > EXP_LIMIT:
            raise OverflowError("monomial exponent overflow")
        out.append(s)
    return tuple(out)


def mono_div(tuple a, tuple b):
    """a / b, or None when b does not divide a."""
    cdef Py_ssize_t i, n = len(a)
    out = []
    for i in range(n):
        d = a[i] - b[i]
        if d < 0:
            return None
        out.append(d)
    return tuple(out)


def mono_divides(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    for i in range(n):
        if a[i] > b[i]:
            return False
    return True


def mono_lcm(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    out = []
    for i in range(n):
        out.append(a[i] if a[i] >= b[i] else b[i])
    return tuple(out)


def mono_deg(tuple a):
    return sum(a)


cdef int _cmp_mono_c(tuple a, tuple b, tuple blocks) except? -2:
    cdef Py_ssize_t k, j, i, nblk
    cdef tuple blk
    for blk in blocks:
        nblk = len(blk)
        da = 0
        db = 0
        for j in range(nblk):
            i = blk[j]
            da += a[i]
            db += b[i]
        if da != db:
            return -1 if da < db else 1
        for k in range(nblk - 1, -1, -1):
            i = blk[k]
            if a[i] != b[i]:
                # grevlex tiebreak: larger exponent in the latest
                # differing variable means the smaller monomial
                return 1 if a[i] < b[i] else -1
    return 0


def cmp_mono(tuple a, tuple b, tuple blocks):
    return _cmp_mono_c(a, b, blocks)


cdef int _cmp_term_c(tuple ta, tuple tb, tuple order) except? -2:
    cdef int c
    cdef tuple blocks = order[0]
    cdef tuple posgroup = order[2]
    policy = order[1]
    ma = ta[0]
    pa = ta[1]
    mb = tb[0]
    pb = tb[1]
    if len(posgroup):
        ga = posgroup[pa]
        gb = posgroup[pb]
        if ga != gb:
            return 1 if ga < gb else -1
    if policy == 1:
        if pa != pb:
            return 1 if pa < pb else -1
        return _cmp_mono_c(ma, mb, blocks)
    c = _cmp_mono_c(ma, mb, blocks)
    if c:
        return c
    if pa != pb:
        return 1 if pa < pb else -1
    return 0


def cmp_term(tuple ta, tuple tb, tuple order):
    return _cmp_term_c(ta, tb, order)


def term_sortkey(tuple term, tuple order):
    """Ascending sort key equivalent to cmp_term."""
    blocks = order[0]
    policy = order[1]
    posgroup = order[2]
    mono = term[0]
    pos = term[1]
    g = posgroup[pos] if posgroup else 0
    mk = tuple(
        (sum(mono[i] for i in blk), tuple(-mono[i] for i in reversed(blk)))
        for blk in blocks
    )
    if policy == 1:
        return (-g, -pos, mk)
    return (-g, mk, -pos)


def coeff_inv(c, p):
    if p == 0:
        return 1 / c
    return pow(c, p - 2, p)


def canon_vec(pairs, tuple order, p):
    """Merge duplicate terms, drop zeros, sort strictly descending."""
    acc = {}
    for term, coeff in pairs:
        if term in acc:
            c = acc[term] + coeff
            if p:
                c %= p
            if c == 0:
                del acc[term]
            else:
                acc[term] = c
        elif coeff != 0:
            acc[term] = coeff
    items = sorted(acc.items(), key=lambda tc: term_sortkey(tc[0], order), reverse=True)
    return tuple(items)


def add_vec(tuple u, tuple v, tuple order, p):
    cdef Py_ssize_t i = 0, j = 0, nu = len(u), nv = len(v)
    cdef int c
    cdef tuple eu, ev
    out = []
    while i < nu and j < nv:
        eu = u[i]
        ev = v[j]
        c = _cmp_term_c(eu[0], ev[0], order)
        if c > 0:
            out.append(eu)
            i += 1
        elif c < 0:
            out.append(ev)
            j += 1
        else:
            s = eu[1] + ev[1]
            if p:
                s %= p
            if s != 0:
                out.append((eu[0], s))
            i += 1
            j += 1
    out.extend(u[i:])
    out.extend(v[j:])
    return tuple(out)


def neg_vec(tuple u, p):
    if p:
        return tuple((t, p - c) for t, c in u)
    return tuple((t, -c) for t, c in u)


def scale_vec(tuple u, coeff, tuple mono, p):
    """coeff * mono * u; order of terms is preserved."""
    cdef tuple e, tm
    if coeff == 0:
        return ()
    out = []
    for e in u:
        tm = e[0]
        cc = coeff * e[1]
        if p:
            cc %= p
            if cc == 0:
                continue
        out.append(((mono_mul(mono, tm[0]), tm[1]), cc))
    return tuple(out)


def mul_vec_poly(tuple u, tuple poly, tuple order, p):
    """u * poly where poly is a rank-1 vec (positions ignored)."""
    cdef tuple e
    acc = ()
    for e in poly:
        acc = add_vec(acc, scale_vec(u, e[1], e[0][0], p), order, p)
    return acc


def monic_vec(tuple u, p):
    if not u:
        return u
    c0 = u[0][1]
    if c0 == 1:
        return u
    inv = coeff_inv(c0, p)
    if p:
        return tuple((t, c * inv % p) for t, c in u)
    return tuple((t, c * inv) for t, c in u)


def nf_vec(tuple u, basis, tuple order, p):
    """Fully reduced normal form of u against basis (a sequence of vecs
    with nonzero leads).  Scans terms from the greatest, reduces by the
    first basis element whose lead divides; deterministic."""
    cdef tuple head, tm_t, gterm, red, g
    done = []
    work = list(u)
    while work:
        head = work[0]
        tm_t = head[0]
        tm = tm_t[0]
        tp = tm_t[1]
        red = None
        for g in basis:
            gterm = (<tuple> g[0])[0]
            if gterm[1] == tp and mono_divides(gterm[0], tm):
                red = g
                break
        if red is None:
            done.append(work.pop(0))
            continue
        gterm = (<tuple> red[0])[0]
        gc = (<tuple> red[0])[1]
        q = mono_div(tm, gterm[0])
        factor = head[1] * coeff_inv(gc, p)
        if p:
            factor %= p
        work = list(add_vec(tuple(work), neg_vec(scale_vec(red, factor, q, p), p), order, p))
    return tuple(done)


def spair_vec(tuple f, tuple g, tuple order, p):
    """S-vector of f and g; leads must sit in the same position."""
    mf_t, cf = f[0]
    mg_t, cg = g[0]
    l = mono_lcm(mf_t[0], mg_t[0])
    uf = mono_div(l, mf_t[0])
    ug = mono_div(l, mg_t[0])
    a = scale_vec(f, coeff_inv(cf, p), uf, p)
    b = scale_vec(g, coeff_inv(cg, p), ug, p)
    return add_vec(a, neg_vec(b, p), order, p)


BACKEND = "cython"
