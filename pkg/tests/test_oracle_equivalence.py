"""Bit-exact comparison of the engine against the independent
linear-algebra oracle on a fixed corpus.

The oracle computes reduced bases by row reduction of Macaulay-style
degree slices and never touches the engine's code path; agreement is on
the shared flat vec representation, with no tolerance of any kind.
Every corpus entry is exercised over the rationals and over F_13.
"""

import pytest

from formalpatch import oracle
from formalpatch.engine import (
    ModuleOrder,
    eliminate,
    module_quotient,
    saturate,
    submodule,
    submodule_intersect,
    syzygy_basis,
    vec_of_polys,
)
from formalpatch.fields import QQ, PrimeField
from formalpatch.poly import LEX, PolyContext, parse_poly

F13 = PrimeField(13)

# (name, vars, tvar, ring_rels, rank, generator coordinate vectors)
CORPUS = [
    ("principal-parabola", ["x", "y"], None, [], 1, [["y - x^2"]]),
    ("two-vars-maximal", ["x", "y"], None, [], 1, [["x"], ["y"]]),
    ("circle-line", ["x", "y"], None, [], 1, [["x^2 + y^2 - 1"], ["x - y"]]),
    ("twisted-cubic", ["x", "y", "z"], None, [], 1, [["y - x^2"], ["z - x^3"]]),
    ("nonradical-mixed", ["x", "y"], None, [], 1, [["x^2"], ["x*y"]]),
    ("symmetric-pair", ["x", "y"], None, [], 1, [["x^2 - y"], ["y^2 - x"]]),
    ("cusp-tangent", ["x", "y"], None, [], 1, [["y^2 - x^3"], ["x*y"]]),
    ("three-var-surface", ["x", "y", "z"], None, [], 1, [["x*y - z"], ["y*z - x"]]),
    ("rank2-koszul", ["x", "y"], None, [], 2, [["x", "y"], ["y", "x"]]),
    ("rank2-shifted", ["x", "y"], None, [], 2, [["x^2", "0"], ["x", "y"], ["0", "y^2"]]),
    ("quotient-trunc2", ["x", "t"], "t", ["t^2"], 1, [["x*t"], ["x^2 - t"]]),
    ("quotient-trunc3-rank2", ["x", "t"], "t", ["t^3"], 2, [["x", "-t"], ["t^2", "0"]]),
    ("quotient-conic", ["x", "y", "t"], "t", ["x*y - t^2"], 1, [["x - t"], ["y^2"]]),
    ("dense-cubic", ["x", "y"], None, [], 1, [["x^3 + y^3 - 1"], ["x + y - 1"]]),
]


def _setting(entry, field):
    name, varnames, tvar, rel_texts, rank, gen_texts = entry
    ctx = PolyContext(field, varnames, tvar=tvar)
    rels = tuple(vec_of_polys([parse_poly(s, ctx)]) for s in rel_texts)
    gens = [vec_of_polys([parse_poly(s, ctx) for s in row]) for row in gen_texts]
    return ctx, rels, rank, gens


def _oracle_gb(ctx, rels, rank, gens, order, maxdeg=8):
    got = oracle.groebner(gens, list(rels), rank, ctx.nvars, order, ctx.p, maxdeg)
    stab = oracle.groebner(gens, list(rels), rank, ctx.nvars, order, ctx.p, maxdeg + 1)
    assert got == stab, "oracle degree bound too small for this entry"
    return got


@pytest.mark.parametrize("field", [QQ, F13], ids=["Q", "F13"])
@pytest.mark.parametrize("entry", CORPUS, ids=[e[0] for e in CORPUS])
def test_reduced_basis_matches_oracle(entry, field):
    ctx, rels, rank, gens = _setting(entry, field)
    order = ModuleOrder().descriptor(ctx)
    b = submodule(gens, ctx, rank, ring_rels=rels, order=order)
    assert list(b.gens) == list(_oracle_gb(ctx, rels, rank, gens, order))


@pytest.mark.parametrize("field", [QQ, F13], ids=["Q", "F13"])
@pytest.mark.parametrize(
    "entry", [CORPUS[0], CORPUS[3], CORPUS[5], CORPUS[13]], ids=lambda e: e[0]
)
def test_lex_basis_matches_oracle(entry, field):
    ctx, rels, rank, gens = _setting(entry, field)
    order = ModuleOrder(LEX).descriptor(ctx)
    b = submodule(gens, ctx, rank, ring_rels=rels, order=order)
    assert list(b.gens) == list(_oracle_gb(ctx, rels, rank, gens, order))


@pytest.mark.parametrize("field", [QQ, F13], ids=["Q", "F13"])
def test_normal_form_matches_oracle(field):
    ctx, rels, rank, gens = _setting(CORPUS[5], field)
    order = ModuleOrder().descriptor(ctx)
    b = submodule(gens, ctx, rank, ring_rels=rels, order=order)
    probe = vec_of_polys([parse_poly("x^3*y + x - 2", ctx)])
    assert b.nf(probe) == oracle.normal_form(
        probe, gens, list(rels), rank, ctx.nvars, order, ctx.p, 9
    )


@pytest.mark.parametrize("field", [QQ, F13], ids=["Q", "F13"])
@pytest.mark.parametrize(
    "entry", [CORPUS[1], CORPUS[8], CORPUS[10], CORPUS[11]], ids=lambda e: e[0]
)
def test_syzygies_match_oracle(entry, field):
    ctx, rels, rank, gens = _setting(entry, field)
    order = ModuleOrder().descriptor(ctx)
    b = submodule(gens, ctx, rank, ring_rels=rels, order=order)
    s = syzygy_basis(b)
    got = oracle.syzygies(
        list(b.gens), list(rels), rank, ctx.nvars, order, ctx.p, 8, 5
    )
    assert list(s.gens) == list(got)


@pytest.mark.parametrize("field", [QQ, F13], ids=["Q", "F13"])
def test_intersection_matches_oracle(field):
    ctx = PolyContext(field, ["x", "y"])
    order = ModuleOrder().descriptor(ctx)
    g1 = [vec_of_polys([parse_poly("x", ctx)])]
    g2 = [vec_of_polys([parse_poly("y", ctx)]), vec_of_polys([parse_poly("x - y^2", ctx)])]
    b = submodule_intersect(
        submodule(g1, ctx, 1, order=order), submodule(g2, ctx, 1, order=order)
    )
    got = oracle.intersect(g1, g2, [], 1, 2, order, ctx.p, 8)
    assert list(b.gens) == list(got)


@pytest.mark.parametrize("field", [QQ, F13], ids=["Q", "F13"])
def test_module_quotient_and_saturation_match_oracle(field):
    ctx = PolyContext(field, ["x", "t"], tvar="t")
    order = ModuleOrder().descriptor(ctx)
    rels = [vec_of_polys([parse_poly("t^3", ctx)])]
    gens = [vec_of_polys([parse_poly("x", ctx), -parse_poly("t", ctx)])]
    t = parse_poly("t", ctx)
    fvec = tuple(((m, 0), c) for (m, _), c in parse_poly("x", ctx).terms)
    b = submodule(gens, ctx, 2, ring_rels=tuple(rels), order=order)
    q = module_quotient(b, parse_poly("x", ctx))
    got_q = oracle.module_quotient(
        list(b.gens), fvec, rels, 2, 2, order, ctx.p, 7, 5
    )
    assert list(q.gens) == list(got_q)
    sat, wit = saturate(b, parse_poly("x", ctx))
    got_s, got_w = oracle.saturate(list(b.gens), fvec, rels, 2, 2, order, ctx.p, 7, 5)
    assert list(sat.gens) == list(got_s)
    assert wit == got_w


@pytest.mark.parametrize("field", [QQ, F13], ids=["Q", "F13"])
def test_elimination_matches_oracle(field):
    ctx = PolyContext(field, ["u", "x", "y"])
    gens = [
        vec_of_polys([parse_poly("u*x - 1", ctx)]),
        vec_of_polys([parse_poly("u*y - x", ctx)]),
    ]
    b = submodule(gens, ctx, 1)
    e = eliminate(b, ["u"])
    elim_order = ((((0,), (1, 2))), 0, ())
    got = oracle.eliminate(list(b.gens), (0,), [], 1, 3, elim_order, ctx.p, 8)
    # the oracle returns the contraction's basis under the elimination
    # order; recompute under the default order for comparison
    got_default = submodule(got, ctx, 1)
    assert e.gens == got_default.gens
