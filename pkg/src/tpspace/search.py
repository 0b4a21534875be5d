"""Enumeration and random generation of finite topological preordered spaces.

Finite topologies and preorders on a fixed point set are in bijection
(a topology is the family of up-sets of its specialization preorder), so a
single preorder enumerator drives both halves of the search.  Topologies are
taken up to relabelling; orders are enumerated labelled.
"""
from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Iterator

from .errors import NotFound
from .preorder import Preorder, PreorderedSpace, flag, transitive_closure
from .topology import FiniteTopology, bits, max_points, union_closure

FLAG_NAMES = ("semiclosed", "closed", "convex", "regular", "normal", "perfectly_normal")
# cheapest flags first
FLAG_COST = {name: k for k, name in enumerate(FLAG_NAMES)}


@lru_cache(maxsize=None)
def preorders(n: int) -> tuple[tuple[int, ...], ...]:
    """All preorders on ``range(n)`` as up-set rows.

    A preorder on ``n`` points extends one on ``n - 1`` points by choosing the
    new point's strict up-set (an up-set) and down-set (a down-set) such that
    everything below it lies below everything above it.
    """
    if n == 0:
        return ((),)
    out = []
    for rows in preorders(n - 1):
        m = n - 1
        down = [0] * m
        for x, row in enumerate(rows):
            for y in bits(row):
                down[y] |= 1 << x
        ups = [S for S in range(1 << m) if all(rows[x] & ~S == 0 for x in bits(S))]
        downs = [S for S in range(1 << m) if all(down[x] & ~S == 0 for x in bits(S))]
        new_bit = 1 << m
        for U in ups:
            for D in downs:
                if any(U & ~rows[d] for d in bits(D)):
                    continue
                new_rows = [rows[x] | (U if D >> x & 1 else 0) | (new_bit if D >> x & 1 else 0)
                            for x in range(m)]
                new_rows.append(U | new_bit)
                out.append(tuple(new_rows))
    return tuple(out)


def _relabel(rows, perm) -> tuple[int, ...]:
    n = len(rows)
    out = [0] * n
    for x in range(n):
        r = 0
        for y in bits(rows[x]):
            r |= 1 << perm[y]
        out[perm[x]] = r
    return tuple(out)


def canonical_form(rows) -> tuple[int, ...]:
    """Least relabelling among those sorting points by (up, down) sizes."""
    n = len(rows)
    down = [0] * n
    for x, row in enumerate(rows):
        for y in bits(row):
            down[y] |= 1 << x
    inv = [(rows[x].bit_count(), down[x].bit_count()) for x in range(n)]
    groups = {}
    for x in range(n):
        groups.setdefault(inv[x], []).append(x)
    keys = sorted(groups)
    best = None
    for choice in itertools.product(*(itertools.permutations(groups[k]) for k in keys)):
        order = [x for block in choice for x in block]
        perm = [0] * n
        for new, old in enumerate(order):
            perm[old] = new
        cand = _relabel(rows, perm)
        if best is None or cand < best:
            best = cand
    return best


@lru_cache(maxsize=None)
def topologies_up_to_iso(n: int) -> tuple[tuple[int, ...], ...]:
    """One specialization preorder per homeomorphism class of topologies."""
    seen = {}
    for rows in preorders(n):
        key = canonical_form(rows)
        seen.setdefault(key, key)
    return tuple(sorted(seen))


def point_names(n: int) -> list[str]:
    return [chr(ord("a") + i) for i in range(n)] if n <= 26 else [f"p{i}" for i in range(n)]


def topology_from_rows(points, rows) -> FiniteTopology:
    """Topology whose minimal neighbourhoods are the given up-sets."""
    return FiniteTopology(points, union_closure(rows) | {(1 << len(points)) - 1},
                          check=False)


def space_from_rows(points, topo_rows, order_rows) -> PreorderedSpace:
    T = topology_from_rows(points, topo_rows)
    return PreorderedSpace(T, Preorder(points, order_rows, check=False))


# -- cheap prefilters on raw rows -------------------------------------------------

def _raw_closed(nbhd, up) -> bool:
    n = len(up)
    full = (1 << n) - 1
    for x in range(n):
        reach = 0
        for u in bits(nbhd[x]):
            reach |= up[u]
        for y in bits(full & ~up[x]):
            if reach & nbhd[y]:
                return False
    return True


def _raw_semiclosed(nbhd, up) -> bool:
    # S closed iff it contains every point whose neighbourhood meets S
    n = len(up)
    down = [0] * n
    for x, row in enumerate(up):
        for y in bits(row):
            down[y] |= 1 << x
    for S in list(up) + down:
        for z in range(n):
            if not S >> z & 1 and nbhd[z] & S:
                return False
    return True


_RAW = {"closed": _raw_closed, "semiclosed": _raw_semiclosed}


def matches(ps: PreorderedSpace, require, forbid) -> bool:
    wanted = [(name, True) for name in require] + [(name, False) for name in forbid]
    wanted.sort(key=lambda item: FLAG_COST[item[0]])
    return all(flag(ps, name) == value for name, value in wanted)


def _validate_flags(require, forbid):
    for name in list(require) + list(forbid):
        if name not in FLAG_NAMES:
            raise ValueError(f"unknown flag {name!r}")


def iter_spaces(n: int) -> Iterator[tuple[tuple, tuple]]:
    """``(topology rows, order rows)`` for every space on ``n`` points, with
    the topology taken up to homeomorphism."""
    orders = preorders(n)
    for topo in topologies_up_to_iso(n):
        for order in orders:
            yield topo, order


def semiclosed_spaces(n: int) -> Iterator[tuple[tuple, tuple]]:
    """Every labelled semiclosed space on ``n`` points.

    If ``i(u)`` and ``d(u)`` are closed and ``u`` lies in the minimal
    neighbourhood of ``x`` then ``x`` is in the closure of ``u``, so
    ``x <= u <= x``.  Conversely any topology whose minimal neighbourhoods
    stay inside indifference classes makes every ``i(x)``, ``d(x)`` closed.
    So these spaces are an order plus an independent topology on each class.
    """
    for order in preorders(n):
        classes, seen = [], 0
        for x in range(n):
            if not seen >> x & 1:
                down_x = sum(1 << y for y in range(n) if order[y] >> x & 1)
                cls = order[x] & down_x
                seen |= cls
                classes.append(list(bits(cls)))
        for choice in itertools.product(*(preorders(len(c)) for c in classes)):
            topo = [0] * n
            for members, rows in zip(classes, choice):
                for k, row in enumerate(rows):
                    topo[members[k]] = sum(1 << members[j] for j in bits(row))
            yield tuple(topo), order


# flags that each force semiclosedness
_SEMICLOSED_FAMILY = {"semiclosed", "closed", "regular", "normal", "perfectly_normal"}


def find_exhaustive(n: int, require=(), forbid=()) -> PreorderedSpace:
    """First space with at most ``n`` points meeting the flag constraints.

    Sizes are tried in increasing order; within a size, topologies in
    canonical order and then all labelled preorders.  When a required flag
    forces semiclosedness only semiclosed spaces are generated, labelled.
    """
    _validate_flags(require, forbid)
    if set(require) & set(forbid):
        raise NotFound("required and forbidden flags overlap")
    raw = [(fn, name in require) for name, fn in _RAW.items()
           if name in require or name in forbid]
    for m in range(1, n + 1):
        points = point_names(m)
        spaces = semiclosed_spaces(m) if _SEMICLOSED_FAMILY & set(require) else iter_spaces(m)
        for topo, order in spaces:
            if any(fn(topo, order) != want for fn, want in raw):
                continue
            ps = space_from_rows(points, topo, order)
            if matches(ps, require, forbid):
                return ps
    raise NotFound(f"no space with at most {n} points")


# -- random generation -----------------------------------------------------------------

def random_topology(rng: random.Random, points, generators: int | None = None) -> FiniteTopology:
    """Topology generated by a random family of subsets."""
    n = len(points)
    k = rng.randint(0, 2 * n) if generators is None else generators
    full = (1 << n) - 1
    nbhd = [full] * n
    for _ in range(k):
        g = rng.randint(0, full)
        for i in bits(g):
            nbhd[i] &= g
    return FiniteTopology.from_neighborhoods(points, nbhd)


def random_preorder(rng: random.Random, n: int, density: float | None = None) -> list[int]:
    p = rng.random() * 0.5 if density is None else density
    up = [1 << i for i in range(n)]
    for x in range(n):
        for y in range(n):
            if x != y and rng.random() < p:
                up[x] |= 1 << y
    return transitive_closure(up)


def close_graph(T: FiniteTopology, up: list[int]) -> list[int]:
    """Smallest closed preorder containing ``up``: alternate topological
    closure of the graph in the square and transitive closure."""
    n = T.n
    while True:
        new = list(up)
        for x in range(n):
            reach = 0
            for u in bits(T.nbhd(x)):
                reach |= up[u]
            for y in range(n):
                if reach & T.nbhd(y):
                    new[x] |= 1 << y
        new = transitive_closure(new)
        if new == up:
            return up
        up = new


def random_space(rng: random.Random, n: int, closed_bias: float = 0.0) -> PreorderedSpace:
    """Random topology and random preorder on ``n`` points.

    With probability ``closed_bias`` the preorder's graph is then closed
    in the square, which makes closed preorders common enough to sample.
    """
    points = point_names(n)
    T = random_topology(rng, points)
    up = random_preorder(rng, n)
    if rng.random() < closed_bias:
        up = close_graph(T, up)
    return PreorderedSpace(T, Preorder(points, up, check=False))


def find_random(n: int, require=(), forbid=(), seed: int = 0,
                tries: int = 20000) -> PreorderedSpace:
    """Seeded random search over spaces with at most ``n`` points."""
    _validate_flags(require, forbid)
    if n > max_points():
        raise ValueError(f"n exceeds the size limit {max_points()}")
    if set(require) & set(forbid):
        raise NotFound("required and forbidden flags overlap")
    rng = random.Random(seed)
    for _ in range(tries):
        ps = random_space(rng, rng.randint(1, n), closed_bias=0.5)
        if matches(ps, require, forbid):
            return ps
    raise NotFound(f"no witness in {tries} random spaces")
