import random
from fractions import Fraction

import pytest

from oracles import Plain, alpha_reference
from tpspace import (MonotoneFn, alpha, combine_alpha, is_continuous, is_isotone, is_utility,
                     make_space, weighted_sum)
from tpspace.errors import InvalidInput
from tpspace.topology import discrete, indiscrete

F = Fraction
CHAIN = make_space("ab", discrete("ab"), [("a", "b")])
SIERPINSKI = make_space("ab", [["a"]])
INDIFFERENT = make_space("ab", indiscrete("ab"), [("a", "b"), ("b", "a")])


def fn(**values):
    return MonotoneFn(list(values), list(values.values()))


def test_values_must_lie_in_unit_interval():
    with pytest.raises(InvalidInput):
        fn(a=F(3, 2))
    with pytest.raises(InvalidInput):
        MonotoneFn("ab", [0])


def test_continuity_examples():
    ps = make_space("abc", discrete("abc"))
    assert is_continuous(ps, fn(a=0, b=F(1, 3), c=1))
    assert not is_continuous(SIERPINSKI, fn(a=1, b=0))
    assert is_continuous(SIERPINSKI, fn(a=F(2, 7), b=F(2, 7)))


def test_isotone_examples():
    assert is_isotone(CHAIN, fn(a=0, b=1))
    assert not is_isotone(CHAIN, fn(a=1, b=0))
    assert is_isotone(INDIFFERENT, fn(a=F(1, 3), b=F(1, 3)))


def test_utility_examples():
    assert not is_utility(CHAIN, fn(a=0, b=0))
    assert is_utility(CHAIN, fn(a=0, b=1))
    assert not is_utility(INDIFFERENT, fn(a=0, b=1))


def test_partial_function_rejected():
    with pytest.raises(InvalidInput):
        is_isotone(CHAIN, fn(a=0))


def random_function(rng, ps):
    denom = rng.choice([1, 2, 3, 4, 8])
    comps = ps.topology.components()
    vals = [F(0)] * ps.n
    for comp in comps:
        if rng.random() < 0.7:
            v = F(rng.randint(0, denom), denom)
            for i in range(ps.n):
                if comp >> i & 1:
                    vals[i] = v
        else:
            for i in range(ps.n):
                if comp >> i & 1:
                    vals[i] = F(rng.randint(0, denom), denom)
    return MonotoneFn(ps.points, vals)


def test_continuity_deciders_agree(mixed_spaces):
    rng = random.Random(11)
    checked = 0
    while checked < 1000:
        ps = rng.choice(mixed_spaces)
        f = random_function(rng, ps)
        rays = is_continuous(ps, f, method="rays")
        assert rays == is_continuous(ps, f, method="components")
        assert rays == Plain.of(ps).continuous(f.as_dict())
        checked += 1


def test_alpha_examples():
    assert alpha(F(1, 2), F(1, 2)) == F(1, 2)
    assert alpha(0, 0) == 0
    assert alpha(F(1, 3), 1) == 1
    with pytest.raises(InvalidInput):
        alpha(0, 1)


def grid(k=8):
    return [F(i, k) for i in range(k + 1)]


def test_alpha_matches_reference_formula():
    for x in grid():
        for y in grid():
            if (x, y) != (0, 1):
                assert alpha(x, y) == alpha_reference(x, y)


def test_alpha_isotone_on_grid():
    pts = [(x, y) for x in grid() for y in grid() if (x, y) != (0, 1)]
    for x, y in pts:
        for x2, y2 in pts:
            if x <= x2 and y <= y2:
                assert alpha(x, y) <= alpha(x2, y2)


def test_first_alpha_formula_is_also_isotone_qualitatively():
    def first(x, y):
        return ((1 + y) / 2) * x ** ((1 - y) / 2)

    g = [i / 8 for i in range(9)]
    for x in g:
        for y in g:
            if x + 1 / 8 <= 1:
                assert first(x, y) <= first(x + 1 / 8, y) + 1e-12
            if y + 1 / 8 <= 1:
                assert first(x, y) <= first(x, y + 1 / 8) + 1e-12


def test_combine_alpha_examples():
    g = fn(a=0, b=1)
    f = combine_alpha(CHAIN, g, g)
    assert f["a"] == 0 and f["b"] == 1
    half = fn(a=F(1, 2), b=F(1, 2))
    assert combine_alpha(INDIFFERENT, half, half)["a"] == F(1, 2)
    zero = fn(a=0, b=0)
    assert combine_alpha(CHAIN, zero, zero)["a"] == 0


def test_combine_alpha_rejects_corner_and_bad_inputs():
    with pytest.raises(InvalidInput):
        combine_alpha(CHAIN, fn(a=0, b=0), fn(a=1, b=1))
    with pytest.raises(InvalidInput):
        combine_alpha(CHAIN, fn(a=1, b=0), fn(a=0, b=0))


def test_weighted_sum_examples():
    g = fn(a=F(1, 5), b=F(4, 5))
    assert weighted_sum([g]) == g
    zero, one = fn(a=0, b=0), fn(a=1, b=1)
    assert weighted_sum([zero, one])["a"] == F(1, 3)
    assert weighted_sum([g, g, g]) == g
    with pytest.raises(InvalidInput):
        weighted_sum([])
    with pytest.raises(InvalidInput):
        weighted_sum([g, fn(a=0)])


def test_weighted_sum_zero_and_one_sets():
    rng = random.Random(3)
    ps = make_space("abcd", discrete("abcd"))
    for _ in range(200):
        fs = [MonotoneFn(ps.points, [F(rng.randint(0, 2), 2) for _ in range(4)])
              for _ in range(rng.randint(1, 4))]
        w = weighted_sum(fs)
        for p in ps.points:
            assert (w[p] == 0) == all(f[p] == 0 for f in fs)
            assert (w[p] == 1) == all(f[p] == 1 for f in fs)
