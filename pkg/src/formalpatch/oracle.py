"""Degree-bounded brute-force oracle for the engine.

Everything here is straight linear algebra over the coefficient field:
span a module's degree slice by multiplying generators with all
monomials that fit under the bound, row-reduce exactly, and read
reduced Groebner bases off the reduced echelon form (rows at pivots
that are minimal in the pivot set are exactly the reduced basis
elements).  Derived operations (intersection, colon, saturation,
elimination, syzygies) are solved as exact linear systems over the same
slices.  No code is shared with the Buchberger path; results are in the
same flat representation so tests can compare bit-exactly.

The bound must be generous enough for the instance; callers are
expected to validate stability (same answer at D and D+1).
"""

from __future__ import annotations

from fractions import Fraction


def _key(term, order):
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


def _mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _mono_divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def all_monos(nvars, maxdeg):
    """All exponent tuples of total degree <= maxdeg, deterministic order."""
    if nvars == 0:
        yield ()
        return
    for d in range(maxdeg + 1):
        for first in range(d, -1, -1):
            for rest in all_monos(nvars - 1, d - first):
                if sum(rest) == d - first:
                    yield (first,) + rest


def _inv(c, p):
    return pow(c, p - 2, p) if p else 1 / c


def _rref(rows, ncols, p):
    """In-place reduced row echelon form; returns rows sorted by pivot
    column, fully reduced, pivots normalized to 1."""
    out = []
    work = [list(r) for r in rows]
    for col in range(ncols):
        pivot = None
        for r in work:
            if r[col] != 0:
                pivot = r
                break
        if pivot is None:
            continue
        work.remove(pivot)
        inv = _inv(pivot[col], p)
        if p:
            pivot = [(c * inv) % p for c in pivot]
        else:
            pivot = [c * inv for c in pivot]
        for rs in (work, out):
            for r in rs:
                c = r[col]
                if c != 0:
                    if p:
                        for i in range(col, ncols):
                            r[i] = (r[i] - c * pivot[i]) % p
                    else:
                        for i in range(col, ncols):
                            r[i] = r[i] - c * pivot[i]
        out.append(pivot)
    return out


class Slice:
    """A degree slice of a free module: column layout + span rows."""

    def __init__(self, nvars, rank, maxdeg, order, p):
        self.nvars = nvars
        self.rank = rank
        self.maxdeg = maxdeg
        self.order = order
        self.p = p
        cols = [(m, j) for j in range(rank) for m in all_monos(nvars, maxdeg)]
        cols.sort(key=lambda t: _key(t, order), reverse=True)
        self.cols = cols
        self.colindex = {t: i for i, t in enumerate(cols)}

    def to_row(self, vec):
        row = [Fraction(0) if self.p == 0 else 0] * len(self.cols)
        for term, coeff in vec:
            if term not in self.colindex:
                raise ValueError("term exceeds oracle degree bound")
            row[self.colindex[term]] = coeff
        return row

    def to_vec(self, row):
        return tuple((self.cols[i], c) for i, c in enumerate(row) if c != 0)

    def span_rows(self, gens, ring_rels):
        """Macaulay rows: every m*g whose terms stay inside the slice."""
        full = list(gens)
        for rel in ring_rels:
            for j in range(self.rank):
                full.append(tuple(((m, j), c) for (m, _), c in rel))
        rows = []
        for g in full:
            if not g:
                continue
            gdeg = max(sum(m) for (m, _), _ in g)
            for m in all_monos(self.nvars, self.maxdeg - gdeg):
                rows.append(self.to_row(tuple(((_mono_mul(m, mt), pos), c) for (mt, pos), c in g)))
        return _rref(rows, len(self.cols), self.p)

    def extract_gb(self, rows):
        """Reduced GB elements = fully reduced rows at minimal pivots."""
        pivots = []
        for r in rows:
            for i, c in enumerate(r):
                if c != 0:
                    pivots.append((i, r))
                    break
        pivterms = [self.cols[i] for i, _ in pivots]
        out = []
        for (i, r), t in zip(pivots, pivterms):
            minimal = True
            for t2 in pivterms:
                if t2 != t and t2[1] == t[1] and _mono_divides(t2[0], t[0]):
                    minimal = False
                    break
            if minimal:
                out.append(self.to_vec(r))
        out.sort(key=lambda v: _key(v[0][0], self.order), reverse=True)
        return tuple(out)

    def reduce(self, vec, rows):
        row = self.to_row(vec)
        for r in rows:
            piv = next(i for i, c in enumerate(r) if c != 0)
            c = row[piv]
            if c != 0:
                if self.p:
                    row = [(a - c * b) % self.p for a, b in zip(row, r)]
                else:
                    row = [a - c * b for a, b in zip(row, r)]
        return self.to_vec(row)


def groebner(gens, ring_rels, rank, nvars, order, p, maxdeg):
    sl = Slice(nvars, rank, maxdeg, order, p)
    return sl.extract_gb(sl.span_rows(gens, ring_rels))


def normal_form(vec, gens, ring_rels, rank, nvars, order, p, maxdeg):
    sl = Slice(nvars, rank, maxdeg, order, p)
    return sl.reduce(vec, sl.span_rows(gens, ring_rels))


def member(vec, gens, ring_rels, rank, nvars, order, p, maxdeg):
    return normal_form(vec, gens, ring_rels, rank, nvars, order, p, maxdeg) == ()


def intersect(g1, g2, ring_rels, rank, nvars, order, p, maxdeg):
    sl = Slice(nvars, rank, maxdeg, order, p)
    a = sl.span_rows(g1, ring_rels)
    b = sl.span_rows(g2, ring_rels)
    n = len(sl.cols)
    zero = Fraction(0) if p == 0 else 0
    stacked = [list(r) + list(r) for r in a] + [list(r) + [zero] * n for r in b]
    red = _rref(stacked, 2 * n, p)
    inter = []
    for r in red:
        if all(c == 0 for c in r[:n]):
            inter.append(r[n:])
    return sl.extract_gb(_rref(inter, n, p))


def _solve_into(cand_vecs, target_rows, sl):
    """Coefficient vectors c with sum(c_i * cand_i) in rowspace(target);
    returns the solution space as RREF rows over candidate indices."""
    n = len(sl.cols)
    k = len(cand_vecs)
    p = sl.p
    zero = Fraction(0) if p == 0 else 0
    one = Fraction(1) if p == 0 else 1
    rows = [list(r) + [zero] * k for r in target_rows]
    for i, v in enumerate(cand_vecs):
        tail = [zero] * k
        tail[i] = one
        rows.append(sl.to_row(v) + tail)
    red = _rref(rows, n + k, p)
    sols = []
    for r in red:
        if all(c == 0 for c in r[:n]):
            sols.append(r[n:])
    return sols


def _extract_in_rank(sol_rows, cand_terms, out_rank, nvars, order, p, maxdeg):
    """Solution rows (over candidate indices) -> reduced GB in the
    output ambient of rank out_rank."""
    out_sl = Slice(nvars, out_rank, maxdeg, order, p)
    vecs = []
    for s in sol_rows:
        vec = tuple((cand_terms[i], c) for i, c in enumerate(s) if c != 0)
        vecs.append(out_sl.to_row(vec))
    return out_sl.extract_gb(_rref(vecs, len(out_sl.cols), p))


def syzygies(gens, ring_rels, rank, nvars, order, p, maxdeg, canddeg):
    """Relation vectors among gens over the presented ring."""
    sl = Slice(nvars, rank, maxdeg, order, p)
    target = sl.span_rows([], ring_rels)
    cands = []
    cand_terms = []
    for i, g in enumerate(gens):
        for m in all_monos(nvars, canddeg):
            scaled = tuple(((_mono_mul(m, mt), pos), c) for (mt, pos), c in g)
            if scaled and max(sum(mm) for (mm, _), _ in scaled) > maxdeg:
                continue
            cands.append(scaled)
            cand_terms.append((m, i))
    sols = _solve_into(cands, target, sl)
    return _extract_in_rank(sols, cand_terms, len(gens), nvars, order, p, canddeg)


def colon_element(gens, m_vec, ring_rels, rank, nvars, order, p, maxdeg, canddeg):
    """The ideal {r : r*m in N} over the presented ring."""
    sl = Slice(nvars, rank, maxdeg, order, p)
    target = sl.span_rows(gens, ring_rels)
    cands = []
    cand_terms = []
    for m in all_monos(nvars, canddeg):
        scaled = tuple(((_mono_mul(m, mt), pos), c) for (mt, pos), c in m_vec)
        if scaled and max(sum(mm) for (mm, _), _ in scaled) > maxdeg:
            continue
        cands.append(scaled)
        cand_terms.append((m, 0))
    sols = _solve_into(cands, target, sl)
    return _extract_in_rank(sols, cand_terms, 1, nvars, order, p, canddeg)


def module_quotient(gens, f_poly, ring_rels, rank, nvars, order, p, maxdeg, canddeg):
    """The submodule {v : f*v in N} over the presented ring."""
    sl = Slice(nvars, rank, maxdeg, order, p)
    target = sl.span_rows(gens, ring_rels)
    fdeg = max(sum(m) for (m, _), _ in f_poly)
    cands = []
    cand_terms = []
    for j in range(rank):
        for m in all_monos(nvars, canddeg):
            if sum(m) + fdeg > maxdeg:
                continue
            prod = tuple(((_mono_mul(m, mf), j), c) for (mf, _), c in f_poly)
            cands.append(prod)
            cand_terms.append((m, j))
    sols = _solve_into(cands, target, sl)
    return _extract_in_rank(sols, cand_terms, rank, nvars, order, p, canddeg)


def saturate(gens, f_poly, ring_rels, rank, nvars, order, p, maxdeg, canddeg):
    cur = groebner(gens, ring_rels, rank, nvars, order, p, canddeg)
    e = 0
    while True:
        nxt = module_quotient(cur, f_poly, ring_rels, rank, nvars, order, p, maxdeg, canddeg)
        if nxt == cur:
            return cur, e
        cur = nxt
        e += 1


def eliminate(gens, block, ring_rels, rank, nvars, order, p, maxdeg):
    """Contraction to the subring without the variables in `block`;
    `order` must make the block greatest (term-over-position)."""
    sl = Slice(nvars, rank, maxdeg, order, p)
    rows = sl.span_rows(gens, ring_rels)
    keep = []
    for r in rows:
        vec = sl.to_vec(r)
        if vec and all(all(m[i] == 0 for i in block) for (m, _), _ in vec):
            keep.append(r)
    return sl.extract_gb(_rref(keep, len(sl.cols), p))
