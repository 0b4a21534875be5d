"""Seeded generators for the test corpus."""
from __future__ import annotations

import random
from functools import lru_cache

from tpspace import (Exhaustion, FiniteTopology, PreorderedSpace, make_preorder,
                     make_topology)
from tpspace.preorder import Preorder, is_closed_preorder
from tpspace.search import close_graph

NAMES = "abcdefgh"


def random_space(rng: random.Random, n: int, close: bool) -> PreorderedSpace:
    """Topology generated by the complements of a random family of closed
    sets, plus a random preorder; with ``close`` the preorder's graph is
    replaced by the smallest closed preorder containing it."""
    points = list(NAMES[:n])
    closed_sets = []
    for _ in range(rng.randint(0, 2 * n)):
        closed_sets.append([p for p in points if rng.random() < 0.5])
    opens = [[p for p in points if p not in C] for C in closed_sets]
    T = make_topology(points, opens)
    density = rng.random() * 0.4
    edges = [(x, y) for x in points for y in points if x != y and rng.random() < density]
    order = make_preorder(points, edges)
    if close:
        order = Preorder(points, close_graph(T, list(order.up)), check=False)
    return PreorderedSpace(T, order)


@lru_cache(maxsize=None)
def closed_corpus(count: int, max_n: int = 6, seed: int = 2024) -> list[PreorderedSpace]:
    """``count`` spaces with closed preorders, sizes 1..max_n."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        ps = random_space(rng, rng.randint(1, max_n), close=rng.random() < 0.7)
        if is_closed_preorder(ps):
            out.append(ps)
    return out


@lru_cache(maxsize=None)
def general_corpus(count: int, max_n: int = 6, seed: int = 7) -> list[PreorderedSpace]:
    rng = random.Random(seed)
    return [random_space(rng, rng.randint(1, max_n), close=rng.random() < 0.3)
            for _ in range(count)]


def rename(ps: PreorderedSpace, tag: str) -> PreorderedSpace:
    points = [f"{p}{tag}" for p in ps.points]
    T = FiniteTopology(points, ps.topology.opens, check=False)
    return PreorderedSpace(T, Preorder(points, list(ps.order.up), check=False))


def random_exhaustion(rng: random.Random, max_points: int = 8, max_pieces: int = 10):
    """Exhaustion of a random closed space by a chain of subspaces, with a
    coherent closed decreasing A and closed increasing B.

    Returns ``(exhaustion, A_per_piece, B_per_piece)`` with the subsets as
    lists of point ids.  Half the time each piece gets its own point names
    so the inclusions are not identities.
    """
    while True:
        E = random_space(rng, rng.randint(1, max_points), close=True)
        if is_closed_preorder(E):
            break
    order = list(range(E.n))
    rng.shuffle(order)
    J = rng.randint(1, max_pieces)
    sizes = sorted(rng.randint(1, E.n) for _ in range(J - 1)) + [E.n]
    masks = [sum(1 << i for i in order[:k]) for k in sizes]
    pieces = [E.restrict(m) for m in masks]

    A = rng.choice(E.closed_decreasing)
    B_choices = [B for B in E.closed_increasing if not A & B]
    B = rng.choice(B_choices)
    A_ids, B_ids = E.ids(A), E.ids(B)

    renamed = rng.random() < 0.5
    if renamed:
        pieces = [rename(K, f"_{j}") for j, K in enumerate(pieces)]
        inclusions = tuple({f"{p}_{j}": f"{p}_{j + 1}" for p in E.restrict(masks[j]).points}
                           for j in range(J - 1))
    else:
        inclusions = ()

    def tag(p, j):
        return f"{p}_{j}" if renamed else p

    A_per = [[tag(p, j) for p in E.restrict(m).points if p in A_ids] for j, m in enumerate(masks)]
    B_per = [[tag(p, j) for p in E.restrict(m).points if p in B_ids] for j, m in enumerate(masks)]
    return Exhaustion(tuple(pieces), inclusions), A_per, B_per
