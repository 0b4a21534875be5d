"""Representing a preorder by continuous isotone functions and utilities."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InvalidInput, NotApplicable
from .functions import (HALF, MonotoneFn, aligned, is_continuous, is_isotone,
                        is_utility, weighted_sum)
from .preorder import PreorderedSpace, is_semiclosed
from .separation import urysohn

REPRESENT = "represent"
ISOTONE = "isotone"
UTILITY = "utility"


def violating_pairs(ps: PreorderedSpace):
    """Ordered pairs ``(x, y)`` of indices with ``x`` not below ``y``."""
    leq = ps.order.leq
    return [(x, y) for x in range(ps.n) for y in range(ps.n) if not leq(x, y)]


def _dedupe(fs: Sequence[MonotoneFn]) -> list[MonotoneFn]:
    seen = set()
    out = []
    for f in fs:
        key = f.values
        if key not in seen:
            seen.add(key)
            out.append(f)
    return out


def isotone_representation(ps: PreorderedSpace) -> list[MonotoneFn]:
    """One Urysohn function per violating pair, deduplicated.

    For ``x`` not below ``y`` the sets ``d(y)`` and ``i(x)`` are disjoint closed
    monotone sets, and the separating ``g`` has ``g(y) = 0 < 1 = g(x)``.
    """
    if not is_semiclosed(ps):
        raise InvalidInput("isotone representation needs a semiclosed space")
    fs = []
    for x, y in violating_pairs(ps):
        fs.append(urysohn(ps, ps.order.down[y], ps.order.up[x]))
    return _dedupe(fs)


def _schedule(gk: list[Fraction], g: list[Fraction], pairs) -> int:
    """Smallest ``n`` making ``(1 - 1/n) g_k + g/n`` strict on every pair
    that ``g_k`` already orders strictly."""
    n = 1
    for x, y in pairs:
        gap = gk[x] - gk[y]
        if gap <= 0:
            continue
        slack = g[y] - g[x]
        # need (n - 1) * gap > slack
        if slack < 0:
            need = 1
        else:
            need = int(slack // gap) + 2
        n = max(n, need)
    return n


def utilities_from_isotones(ps: PreorderedSpace, G: Sequence[MonotoneFn]) -> list[MonotoneFn]:
    """Turn an isotone representation into a representation by utilities.

    Emits the normalised weighted sum ``g`` of ``G`` followed by one blend
    ``(1 - 1/n) g_k + g/n`` per member, with ``n`` the least integer that keeps
    every strict comparison ``g_k`` witnesses.
    """
    if not verify_representation(ps, G, REPRESENT):
        raise InvalidInput("G does not represent the preorder")
    if not G:
        return [MonotoneFn.constant(ps.points, HALF)]
    g = weighted_sum(list(G))
    gv = aligned(ps, g)
    pairs = violating_pairs(ps)
    family = [g]
    for gk in G:
        kv = aligned(ps, gk)
        n = _schedule(kv, gv, pairs)
        w = Fraction(1, n)
        family.append(MonotoneFn(ps.points, [(1 - w) * a + w * b for a, b in zip(kv, gv)]))
    return _dedupe(family)


def utility_representation(ps: PreorderedSpace) -> list[MonotoneFn]:
    """Continuous utilities ``f_k`` with ``x <= y`` iff every ``f_k(x) <= f_k(y)``."""
    if not ps.flags.regular:
        raise NotApplicable("utility representation needs a regularly preordered space")
    return utilities_from_isotones(ps, isotone_representation(ps))


def verify_representation(ps: PreorderedSpace, F: Sequence[MonotoneFn], mode: str = REPRESENT) -> bool:
    """Exhaustive check over all ordered pairs.

    ``represent``: ``x <= y`` iff every member has ``f(x) <= f(y)``.
    ``isotone``: representation, and every member continuous isotone.
    ``utility``: representation, and every member a continuous utility.
    """
    if mode not in (REPRESENT, ISOTONE, UTILITY):
        raise ValueError(f"unknown mode {mode!r}")
    vals = [aligned(ps, f) for f in F]
    leq = ps.order.leq
    for x in range(ps.n):
        for y in range(ps.n):
            if leq(x, y) != all(v[x] <= v[y] for v in vals):
                return False
    if mode == ISOTONE:
        return all(is_continuous(ps, f) and is_isotone(ps, f) for f in F)
    if mode == UTILITY:
        return all(is_continuous(ps, f) and is_utility(ps, f) for f in F)
    return True
