"""Finite topologies stored as the explicit family of their open sets.

Subsets are bit masks over the ordered point list: bit ``i`` stands for
``points[i]``.  The user-facing functions accept either such a mask or an
iterable of point ids and answer in the same form they were given.
"""
from __future__ import annotations

import os
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import InvalidSpace, TooLarge

HARD_MAX_POINTS = 16
MAX_PRODUCT_POINTS = 256
MAX_FAMILY = 2 ** 20


def max_points() -> int:
    """Size guard for ambient spaces; ``TPS_MAX_POINTS`` may lower it."""
    raw = os.environ.get("TPS_MAX_POINTS")
    if not raw:
        return HARD_MAX_POINTS
    try:
        value = int(raw)
    except ValueError:
        return HARD_MAX_POINTS
    return max(1, min(value, HARD_MAX_POINTS))


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def union_closure(generators: Iterable[int], cap: int = MAX_FAMILY) -> set[int]:
    """All unions of members of ``generators`` (the empty union included)."""
    family = {0}
    for g in set(generators):
        if g in family:
            continue
        family |= {f | g for f in family}
        if len(family) > cap:
            raise TooLarge(f"open family exceeds {cap} members")
    return family


class FiniteTopology:
    """A finite point set with its full family of open sets."""

    __slots__ = ("points", "opens", "full", "_index", "_nbhd", "_sorted")

    def __init__(self, points: Sequence[Hashable], opens: Iterable[int], *,
                 limit: int | None = None, check: bool = True):
        points = tuple(points)
        limit = max_points() if limit is None else limit
        if not points:
            raise InvalidSpace("a space needs at least one point")
        if len(points) > limit:
            raise TooLarge(f"{len(points)} points exceeds the limit of {limit}")
        index = {p: i for i, p in enumerate(points)}
        if len(index) != len(points):
            raise InvalidSpace("duplicate point identifiers")
        self.points = points
        self.full = (1 << len(points)) - 1
        self.opens = frozenset(opens)
        self._index = index
        self._sorted = None
        nbhd = [self.full] * len(points)
        for o in self.opens:
            if o & ~self.full or o < 0:
                raise InvalidSpace("open set mentions unknown points")
            for i in bits(o):
                nbhd[i] &= o
        self._nbhd = tuple(nbhd)
        if check:
            self._check()

    def _check(self):
        if 0 not in self.opens or self.full not in self.opens:
            raise InvalidSpace("empty set and whole space must be open")
        # A family containing its minimal neighbourhoods and all their unions
        # is exactly a union/intersection-closed family on a finite set.
        if any(u not in self.opens for u in self._nbhd):
            raise InvalidSpace("open family is not closed under intersection")
        try:
            generated = union_closure(self._nbhd, cap=len(self.opens))
        except TooLarge:
            generated = None
        if generated is None or len(generated) != len(self.opens):
            raise InvalidSpace("open family is not closed under union")

    @classmethod
    def from_neighborhoods(cls, points, nbhds, *, limit=None, cap=MAX_FAMILY):
        opens = union_closure(nbhds, cap=cap) | {(1 << len(points)) - 1}
        return cls(points, opens, limit=limit, check=False)

    # -- bookkeeping -------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.points)

    def index(self, p) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise InvalidSpace(f"unknown point {p!r}") from None

    def mask(self, ids: Iterable) -> int:
        m = 0
        for p in ids:
            m |= 1 << self.index(p)
        return m

    def ids(self, mask: int) -> frozenset:
        return frozenset(self.points[i] for i in bits(mask))

    def sorted_ids(self, mask: int) -> list:
        return [self.points[i] for i in bits(mask)]

    def open_list(self) -> list[int]:
        """Opens in a deterministic order: by size, then by bit encoding."""
        if self._sorted is None:
            self._sorted = sorted(self.opens, key=lambda o: (o.bit_count(), o))
        return self._sorted

    # -- topology ------------------------------------------------------------

    def nbhd(self, i: int) -> int:
        return self._nbhd[i]

    def is_open(self, mask: int) -> bool:
        return mask in self.opens

    def is_closed(self, mask: int) -> bool:
        return (self.full & ~mask) in self.opens

    def interior(self, mask: int) -> int:
        out = 0
        for i, u in enumerate(self._nbhd):
            if u & ~mask == 0:
                out |= 1 << i
        return out

    def closure(self, mask: int) -> int:
        out = 0
        for i, u in enumerate(self._nbhd):
            if u & mask:
                out |= 1 << i
        return out

    def components(self) -> list[int]:
        """Classes of the symmetric-transitive closure of specialization.

        On a finite space these are the minimal nonempty clopen sets, so a
        real-valued function is continuous iff it is constant on each one.
        """
        seen = 0
        comps = []
        for start in range(self.n):
            if seen >> start & 1:
                continue
            comp = 1 << start
            frontier = comp
            while frontier:
                grow = 0
                for i in bits(frontier):
                    grow |= self._nbhd[i]
                    for j in range(self.n):
                        if self._nbhd[j] >> i & 1:
                            grow |= 1 << j
                frontier = grow & ~comp
                comp |= grow
            seen |= comp
            comps.append(comp)
        return comps

    def __eq__(self, other):
        if not isinstance(other, FiniteTopology):
            return NotImplemented
        return self.points == other.points and self.opens == other.opens

    def __hash__(self):
        return hash((self.points, self.opens))

    def __repr__(self):
        return f"FiniteTopology(n={self.n}, opens={len(self.opens)})"


def _coerce(T: FiniteTopology, S) -> tuple[int, bool]:
    if isinstance(S, int):
        if S & ~T.full or S < 0:
            raise InvalidSpace("subset mask mentions unknown points")
        return S, False
    return T.mask(S), True


def _out(T: FiniteTopology, mask: int, as_ids: bool):
    return T.ids(mask) if as_ids else mask


# -- constructions -----------------------------------------------------------

def make_topology(points, generating_family) -> FiniteTopology:
    """Coarsest topology on ``points`` in which every generator is open."""
    points = tuple(points)
    if not points:
        raise InvalidSpace("a space needs at least one point")
    index = {p: i for i, p in enumerate(points)}
    if len(index) != len(points):
        raise InvalidSpace("duplicate point identifiers")
    full = (1 << len(points)) - 1
    gens = []
    for g in generating_family:
        m = 0
        for p in g:
            if p not in index:
                raise InvalidSpace(f"generator references unknown point {p!r}")
            m |= 1 << index[p]
        gens.append(m)
    # Finite intersections of generators are generated by the minimal
    # neighbourhoods, and every open is a union of those.
    nbhd = [full] * len(points)
    for g in gens:
        for i in bits(g):
            nbhd[i] &= g
    return FiniteTopology.from_neighborhoods(points, nbhd)


def discrete(points) -> FiniteTopology:
    points = tuple(points)
    return make_topology(points, [[p] for p in points])


def indiscrete(points) -> FiniteTopology:
    return make_topology(points, [])


def closure(T: FiniteTopology, S):
    m, as_ids = _coerce(T, S)
    return _out(T, T.closure(m), as_ids)


def interior(T: FiniteTopology, S):
    m, as_ids = _coerce(T, S)
    return _out(T, T.interior(m), as_ids)


def minimal_neighborhood(T: FiniteTopology, x) -> frozenset:
    """Intersection of all opens containing the point ``x``."""
    return T.ids(T.nbhd(T.index(x)))


def restrict_mask(mask: int, positions: Sequence[int]) -> int:
    """Re-encode ``mask`` over the sub-list of point positions."""
    out = 0
    for k, i in enumerate(positions):
        if mask >> i & 1:
            out |= 1 << k
    return out


def expand_mask(mask: int, positions: Sequence[int]) -> int:
    out = 0
    for k in bits(mask):
        out |= 1 << positions[k]
    return out


def subspace(T: FiniteTopology, S) -> FiniteTopology:
    """Induced topology on ``S``; points keep the ambient order."""
    m, _ = _coerce(T, S)
    positions = list(bits(m))
    points = [T.points[i] for i in positions]
    opens = {restrict_mask(o, positions) for o in T.opens}
    return FiniteTopology(points, opens, check=False)


def product(T1: FiniteTopology, T2: FiniteTopology) -> FiniteTopology:
    """Product topology on ``(x, y)`` pairs, ordered row-major."""
    n1, n2 = T1.n, T2.n
    if n1 * n2 > MAX_PRODUCT_POINTS:
        raise TooLarge(f"product has {n1 * n2} points (max {MAX_PRODUCT_POINTS})")
    points = [(x, y) for x in T1.points for y in T2.points]
    nbhd = []
    for i in range(n1):
        for j in range(n2):
            m = 0
            for a in bits(T1.nbhd(i)):
                for b in bits(T2.nbhd(j)):
                    m |= 1 << (a * n2 + b)
            nbhd.append(m)
    # distinct inclusion-minimal neighbourhoods are disjoint, so every union
    # of them is a different open set
    distinct = set(nbhd)
    atoms = sum(1 for u in distinct if not any(v != u and v & ~u == 0 for v in distinct))
    if atoms > MAX_FAMILY.bit_length() - 1:
        raise TooLarge(f"product has at least 2^{atoms} open sets")
    return FiniteTopology.from_neighborhoods(points, nbhd, limit=MAX_PRODUCT_POINTS)


def disjoint_union(spaces: Sequence[FiniteTopology]) -> FiniteTopology:
    """Sum topology; points are tagged ``(x, k)`` with ``k`` the component."""
    if not spaces:
        raise InvalidSpace("disjoint union of no spaces")
    points = []
    nbhd = []
    offset = 0
    for k, T in enumerate(spaces):
        points.extend((x, k) for x in T.points)
        nbhd.extend(T.nbhd(i) << offset for i in range(T.n))
        offset += T.n
    return FiniteTopology.from_neighborhoods(points, nbhd, limit=max(offset, 1))


def quotient_topology(T: FiniteTopology, class_map) -> FiniteTopology:
    """Finest topology on the class ids making the projection continuous.

    ``class_map`` maps every point to a class id; class ids are listed in
    order of first appearance along ``T.points``.
    """
    classes: dict = {}
    proj = []
    for p in T.points:
        try:
            c = class_map[p]
        except KeyError:
            raise InvalidSpace(f"class map is not total: {p!r} unmapped") from None
        proj.append(classes.setdefault(c, len(classes)))
    members = [0] * len(classes)
    for i, c in enumerate(proj):
        members[c] |= 1 << i
    opens = set()
    for o in T.opens:
        image = 0
        for i in bits(o):
            image |= 1 << proj[i]
        saturated = 0
        for c in bits(image):
            saturated |= members[c]
        if saturated == o:
            opens.add(image)
    return FiniteTopology(list(classes), opens, limit=T.n, check=False)
