"""Randomised laws over small spaces, driven by hypothesis."""
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import Plain
from tpspace import MonotoneFn, alpha, classify, weighted_sum
from tpspace.search import point_names, preorders, space_from_rows


@st.composite
def spaces(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    rows = preorders(n)
    topo = rows[draw(st.integers(0, len(rows) - 1))]
    order = rows[draw(st.integers(0, len(rows) - 1))]
    return space_from_rows(point_names(n), topo, order)


@st.composite
def space_and_subsets(draw, k=2):
    ps = draw(spaces())
    return (ps, *[draw(st.integers(0, ps.full)) for _ in range(k)])


unit = st.fractions(0, 1, max_denominator=12)


@given(space_and_subsets())
def test_closure_laws(args):
    ps, A, B = args
    cl = ps.topology.closure
    assert cl(A) & A == A
    assert cl(cl(A)) == cl(A)
    assert cl(A | B) == cl(A) | cl(B)
    assert ps.topology.is_closed(cl(A))
    assert ps.topology.interior(A) == ps.full & ~cl(ps.full & ~A)


@given(space_and_subsets(k=1))
def test_monotone_hulls_are_least(args):
    ps, S = args
    o = Plain.of(ps)
    ids = ps.ids
    assert ids(ps.inc_hull(S)) == o.i(ids(S))
    assert ids(ps.dec_hull(S)) == o.d(ids(S))
    assert ids(ps.closed_inc_hull(S)) == o.I(ids(S))
    assert ids(ps.closed_dec_hull(S)) == o.D(ids(S))
    for kind, hull in (("open_dec", ps.open_dec_hull), ("open_inc", ps.open_inc_hull)):
        h = ids(hull(S))
        supersets = [U for U in o.family(kind) if ids(S) <= U]
        assert h in supersets
        assert all(h <= U for U in supersets)


@given(spaces())
def test_hierarchy_collapses_below_semiclosed(ps):
    c = classify(ps)
    assert c.chain_holds()
    assert c.semiclosed == c.closed == c.regular == c.normal == c.perfectly_normal
    T, up, down = ps.topology, ps.order.up, ps.order.down
    inside = all(T.nbhd(x) & ~(up[x] & down[x]) == 0 for x in range(ps.n))
    assert inside == c.semiclosed


@given(spaces())
def test_flags_match_oracle(ps):
    c, o = classify(ps), Plain.of(ps)
    assert (c.semiclosed, c.closed, c.convex) == (o.semiclosed(), o.closed(), o.convex())
    assert (c.regular, c.normal) == (o.regular(), o.normal())


@given(st.lists(st.lists(unit, min_size=3, max_size=3), min_size=1, max_size=5))
def test_weighted_sum_bounds(rows):
    fs = [MonotoneFn("abc", r) for r in rows]
    w = weighted_sum(fs)
    for p in "abc":
        vals = [f[p] for f in fs]
        assert min(vals) <= w[p] <= max(vals)
        assert (w[p] == 0) == all(v == 0 for v in vals)
        assert (w[p] == 1) == all(v == 1 for v in vals)


@given(unit, unit, unit, unit)
def test_alpha_is_isotone(x, y, dx, dy):
    x2, y2 = max(x, dx), max(y, dy)
    if (x, y) == (0, 1) or (x2, y2) == (0, 1):
        return
    assert alpha(x, y) <= alpha(x2, y2)


@settings(max_examples=300)
@given(unit, unit)
def test_alpha_level_sets(x, y):
    if (x, y) == (0, 1):
        return
    a = alpha(x, y)
    assert 0 <= a <= 1
    assert (a == 0) == (x == 0)
    assert (a == 1) == (y == 1)
    if x == y:
        assert a == x


@given(spaces(), unit)
def test_constants_are_continuous_isotone(ps, c):
    from tpspace import is_continuous, is_isotone
    f = MonotoneFn.constant(ps.points, Fraction(c))
    assert is_continuous(ps, f) and is_isotone(ps, f)
