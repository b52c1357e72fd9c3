"""Pure-Python hot kernel: monomial/term arithmetic and polynomial-vector
reduction.

This module and its compiled twin (_kernel_cy) implement the same API on
the same flat representation; `formalpatch.kernel` picks one at import.
Everything here is a pure function so results are independent of backend.

Representation
--------------
monomial   tuple of ints, one exponent per variable (dense, small).
term       (monomial, position); position 0 for ring elements.
vec        tuple of ((monomial, position), coeff) pairs, strictly
           descending under the active order, no zero coefficients.
coeff      Fraction when p == 0, else int in [1, p).
order      (blocks, policy, posgroup):
           blocks    tuple of tuples of variable indices; each block is
                     compared by graded reverse lex, blocks in sequence
                     (lex = singleton blocks; elimination = front block).
           policy    0 = term-over-position, 1 = position-over-term;
                     lower positions are greater either way.
           posgroup  tuple mapping position -> group, compared before
                     everything (lower group greater); () means trivial.
"""

from __future__ import annotations

from fractions import Fraction

EXP_LIMIT = 1 << 60


def mono_one(nvars):
    return (0,) * nvars


def mono_mul(a, b):
    out = []
    for x, y in zip(a, b):
        s = x + y
        if s > EXP_LIMIT:
            raise OverflowError("monomial exponent overflow")
        out.append(s)
    return tuple(out)


def mono_div(a, b):
    """a / b, or None when b does not divide a."""
    out = []
    for x, y in zip(a, b):
        d = x - y
        if d < 0:
            return None
        out.append(d)
    return tuple(out)


def mono_divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_lcm(a, b):
    return tuple(x if x >= y else y for x, y in zip(a, b))


def mono_deg(a):
    return sum(a)


def cmp_mono(a, b, blocks):
    for blk in blocks:
        da = 0
        db = 0
        for i in blk:
            da += a[i]
            db += b[i]
        if da != db:
            return -1 if da < db else 1
        for k in range(len(blk) - 1, -1, -1):
            i = blk[k]
            if a[i] != b[i]:
                # grevlex tiebreak: larger exponent in the latest
                # differing variable means the smaller monomial
                return 1 if a[i] < b[i] else -1
    return 0


def cmp_term(ta, tb, order):
    blocks, policy, posgroup = order
    ma, pa = ta
    mb, pb = tb
    if posgroup:
        ga = posgroup[pa]
        gb = posgroup[pb]
        if ga != gb:
            return 1 if ga < gb else -1
    if policy == 1:
        if pa != pb:
            return 1 if pa < pb else -1
        return cmp_mono(ma, mb, blocks)
    c = cmp_mono(ma, mb, blocks)
    if c:
        return c
    if pa != pb:
        return 1 if pa < pb else -1
    return 0


def term_sortkey(term, order):
    """Ascending sort key equivalent to cmp_term."""
    blocks, policy, posgroup = order
    mono, pos = term
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


def canon_vec(pairs, order, p):
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


def add_vec(u, v, order, p):
    out = []
    i = 0
    j = 0
    nu = len(u)
    nv = len(v)
    while i < nu and j < nv:
        tu, cu = u[i]
        tv, cv = v[j]
        c = cmp_term(tu, tv, order)
        if c > 0:
            out.append(u[i])
            i += 1
        elif c < 0:
            out.append(v[j])
            j += 1
        else:
            s = cu + cv
            if p:
                s %= p
            if s != 0:
                out.append((tu, s))
            i += 1
            j += 1
    out.extend(u[i:])
    out.extend(v[j:])
    return tuple(out)


def neg_vec(u, p):
    if p:
        return tuple((t, p - c) for t, c in u)
    return tuple((t, -c) for t, c in u)


def scale_vec(u, coeff, mono, p):
    """coeff * mono * u; order of terms is preserved."""
    if coeff == 0:
        return ()
    out = []
    for (m, pos), c in u:
        cc = coeff * c
        if p:
            cc %= p
            if cc == 0:
                continue
        out.append(((mono_mul(mono, m), pos), cc))
    return tuple(out)


def mul_vec_poly(u, poly, order, p):
    """u * poly where poly is a rank-1 vec (positions ignored)."""
    acc = ()
    for (m, _), c in poly:
        acc = add_vec(acc, scale_vec(u, c, m, p), order, p)
    return acc


def monic_vec(u, p):
    if not u:
        return u
    c0 = u[0][1]
    if c0 == 1:
        return u
    inv = coeff_inv(c0, p)
    if p:
        return tuple((t, c * inv % p) for t, c in u)
    return tuple((t, c * inv) for t, c in u)


def nf_vec(u, basis, order, p):
    """Fully reduced normal form of u against basis (a sequence of vecs
    with nonzero leads).  Scans terms from the greatest, reduces by the
    first basis element whose lead divides; deterministic."""
    done = []
    work = list(u)
    while work:
        (tm, tp), tc = work[0]
        red = None
        for g in basis:
            (gm, gp), gc = g[0]
            if gp == tp and mono_divides(gm, tm):
                red = g
                break
        if red is None:
            done.append(work.pop(0))
            continue
        (gm, gp), gc = red[0]
        q = mono_div(tm, gm)
        factor = tc * coeff_inv(gc, p)
        if p:
            factor %= p
        work = list(add_vec(tuple(work), neg_vec(scale_vec(red, factor, q, p), p), order, p))
    return tuple(done)


def spair_vec(f, g, order, p):
    """S-vector of f and g; leads must sit in the same position."""
    (mf, pf), cf = f[0]
    (mg, pg), cg = g[0]
    l = mono_lcm(mf, mg)
    uf = mono_div(l, mf)
    ug = mono_div(l, mg)
    a = scale_vec(f, coeff_inv(cf, p), uf, p)
    b = scale_vec(g, coeff_inv(cg, p), ug, p)
    return add_vec(a, neg_vec(b, p), order, p)


BACKEND = "python"
