import itertools
from fractions import Fraction

import pytest

from oracles import Plain
from tpspace import (check_subspace_inheritance, classify, closed_dec_hull, closed_inc_hull,
                     dec_hull, enumerate_monotone_opens, inc_hull, interpolate,
                     is_closed_preorder, make_preorder, make_space)
from tpspace.errors import InvalidSpace, TooLarge
from tpspace.preorder import DECREASING, INCREASING, Preorder, exact_level_feasible, flag
from tpspace.topology import discrete, indiscrete


def fs(*items):
    return frozenset(items)


DISCRETE_CHAIN = make_space("ab", discrete("ab"), [("a", "b")])
SIERPINSKI = make_space("ab", [["a"]])
INDIFFERENT = make_space("ab", indiscrete("ab"), [("a", "b"), ("b", "a")])


def test_make_preorder_examples():
    P = make_preorder("ab", [("a", "b")])
    assert P.leq(0, 1) and not P.leq(1, 0) and P.leq(0, 0)
    Q = make_preorder("abc", [("a", "b"), ("b", "c")])
    assert Q.leq(0, 2)
    R = make_preorder("ab", [("a", "b"), ("b", "a")])
    assert R.leq(0, 1) and R.leq(1, 0)
    with pytest.raises(InvalidSpace):
        make_preorder("ab", [("a", "z")])


def test_preorder_rejects_non_preorders():
    with pytest.raises(InvalidSpace):
        Preorder("ab", [0b00, 0b10])  # not reflexive
    with pytest.raises(InvalidSpace):
        Preorder("abc", [0b011, 0b110, 0b100])  # not transitive


def test_hull_examples():
    assert inc_hull(DISCRETE_CHAIN, {"a"}) == fs("a", "b")
    assert inc_hull(DISCRETE_CHAIN, set()) == fs()
    V = make_space("abc", discrete("abc"), [("a", "b"), ("a", "c")])
    assert dec_hull(V, {"b", "c"}) == fs("a", "b", "c")


def test_closed_hull_examples():
    assert closed_inc_hull(DISCRETE_CHAIN, {"a"}) == fs("a", "b")
    for ps in (DISCRETE_CHAIN, SIERPINSKI, INDIFFERENT):
        assert closed_inc_hull(ps, set()) == fs()
        assert closed_dec_hull(ps, set(ps.points)) == frozenset(ps.points)
    ps = make_space("ab", [["b"]])
    assert closed_inc_hull(ps, {"b"}) == fs("a", "b")


def test_closed_hulls_match_oracle(mixed_spaces):
    for ps in mixed_spaces[:150]:
        o = Plain.of(ps)
        for S in range(1 << ps.n):
            ids = ps.ids(S)
            assert ps.ids(ps.closed_inc_hull(S)) == o.I(ids)
            assert ps.ids(ps.closed_dec_hull(S)) == o.D(ids)


def test_is_closed_preorder_examples():
    assert is_closed_preorder(DISCRETE_CHAIN)
    assert not is_closed_preorder(SIERPINSKI)
    assert is_closed_preorder(INDIFFERENT)


def test_closed_preorder_two_methods_agree(mixed_spaces):
    # the square of a 5-point space can already exceed the family cap
    for ps in mixed_spaces:
        r = is_closed_preorder(ps, method="rectangles")
        assert r == Plain.of(ps).closed()
        if ps.n <= 4:
            assert r == is_closed_preorder(ps, method="product")


def test_product_route_reports_size():
    ps = make_space("abcdef", discrete("abcdef"))
    with pytest.raises(TooLarge):
        is_closed_preorder(ps, method="product")


def test_classify_examples():
    assert all(DISCRETE_CHAIN.flags.as_dict().values())
    c = classify(SIERPINSKI)
    assert not c.semiclosed
    assert c.witnesses["semiclosed"]["limit"] == "b"
    assert classify(INDIFFERENT).normal


def test_classify_matches_oracle(mixed_spaces):
    for ps in mixed_spaces:
        if ps.n > 5:
            continue
        o = Plain.of(ps)
        expected = {"semiclosed": o.semiclosed(), "closed": o.closed(), "convex": o.convex(),
                    "regular": o.regular(), "normal": o.normal(),
                    "perfectly_normal": o.perfectly_normal()}
        assert classify(ps).as_dict() == expected


def test_classify_cross_check(closed_spaces):
    for ps in closed_spaces[:60]:
        assert classify(ps, cross_check=True).perfectly_normal


def test_non_exhaustive_normality_agrees(mixed_spaces):
    for ps in mixed_spaces:
        assert classify(ps, exhaustive=False).normal == classify(ps).normal


def test_witnesses_only_for_false_flags(mixed_spaces):
    for ps in mixed_spaces[:100]:
        c = classify(ps)
        for name in c.FLAGS:
            assert (name in c.witnesses) == (not getattr(c, name))


def test_single_flag_matches_classify(mixed_spaces):
    for ps in mixed_spaces[:100]:
        c = classify(ps)
        for name in c.FLAGS:
            assert flag(ps, name) == getattr(c, name)


def test_enumerate_monotone_opens_examples():
    dec = enumerate_monotone_opens(DISCRETE_CHAIN, DECREASING)
    assert {DISCRETE_CHAIN.ids(m) for m in dec} == {fs(), fs("a"), fs("a", "b")}
    ps = make_space("abc", indiscrete("abc"), [("a", "b")])
    assert {ps.ids(m) for m in enumerate_monotone_opens(ps, INCREASING)} == {fs(), fs("a", "b", "c")}
    ps = make_space("ab", discrete("ab"))
    assert len(enumerate_monotone_opens(ps, DECREASING)) == 4


def test_enumerate_monotone_opens_is_filter(mixed_spaces):
    for ps in mixed_spaces[:150]:
        o = Plain.of(ps)
        assert {ps.ids(m) for m in enumerate_monotone_opens(ps, INCREASING)} == set(o.family("open_inc"))
        assert {ps.ids(m) for m in enumerate_monotone_opens(ps, DECREASING)} == set(o.family("open_dec"))


def test_interpolation_on_normal_spaces(closed_spaces):
    for ps in closed_spaces[:200]:
        inc = enumerate_monotone_opens(ps, INCREASING)
        for F in range(1 << ps.n):
            if not ps.is_increasing(F):
                continue
            for V in ps.topology.opens:
                if F & ~V:
                    continue
                W = interpolate(ps, F, V, INCREASING)
                exists = any(F & ~w == 0 and w & ~V == 0 for w in inc)
                assert (W is not None) == exists
                if W is not None:
                    assert W in inc and F & ~W == 0 and W & ~V == 0


def test_subspace_inheritance_examples(closed_spaces):
    for ps in closed_spaces[:150]:
        for S in range(1, 1 << ps.n, 3):
            rep = check_subspace_inheritance(ps, S)
            assert rep.closed_inherited and rep.semiclosed_inherited
            assert rep.hull_identity and rep.preordered_subspace
    ps = make_space("abc", discrete("abc"), [("a", "b"), ("b", "c")])
    rep = check_subspace_inheritance(ps, {"a", "c"})
    assert rep.preordered_subspace
    rep = check_subspace_inheritance(ps, set(ps.points))
    assert rep.hull_identity and rep.preordered_subspace


def test_exact_level_feasibility_matches_grid_oracle(mixed_spaces):
    grid = [Fraction(k, 4) for k in range(5)]
    for ps in mixed_spaces:
        if ps.n > 5:
            continue
        o = Plain.of(ps)
        funcs = [f for f in o.component_functions(grid) if o.isotone(f)]
        for A, B in itertools.product(ps.closed_decreasing, ps.closed_increasing):
            if A & B:
                continue
            a, b = ps.ids(A), ps.ids(B)
            found = any(frozenset(p for p in f if f[p] == 0) == a
                        and frozenset(p for p in f if f[p] == 1) == b for f in funcs)
            assert exact_level_feasible(ps, A, B) == found


def test_semiclosed_minimal_neighbourhoods_stay_in_classes(mixed_spaces):
    for ps in mixed_spaces:
        if ps.flags.semiclosed:
            for x in range(ps.n):
                cls = ps.order.up[x] & ps.order.down[x]
                assert ps.topology.nbhd(x) & ~cls == 0
