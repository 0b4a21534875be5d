"""Preorders on finite topologies and the separation hierarchy.

All decision procedures here are exact.  Subsets are bit masks over
``ps.points`` unless a function says otherwise; the module-level wrappers
also accept iterables of point ids.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from .errors import InternalError, InvalidSpace
from .topology import (FiniteTopology, _coerce, _out, bits, expand_mask, product,
                       restrict_mask, subspace)

INCREASING = "increasing"
DECREASING = "decreasing"


class Preorder:
    """Reflexive transitive relation, stored as up-set and down-set rows."""

    __slots__ = ("points", "up", "down")

    def __init__(self, points, up, *, check=True):
        self.points = tuple(points)
        n = len(self.points)
        self.up = tuple(up)
        if len(self.up) != n:
            raise InvalidSpace("relation rows do not match the points")
        down = [0] * n
        for x, row in enumerate(self.up):
            for y in bits(row):
                down[y] |= 1 << x
        self.down = tuple(down)
        if check:
            for x, row in enumerate(self.up):
                if not row >> x & 1:
                    raise InvalidSpace("relation is not reflexive")
                for y in bits(row):
                    if self.up[y] & ~row:
                        raise InvalidSpace("relation is not transitive")

    def leq(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def pairs(self):
        """Related pairs ``(x, y)`` with ``x <= y`` and ``x != y``."""
        for x, row in enumerate(self.up):
            for y in bits(row & ~(1 << x)):
                yield x, y

    def is_antisymmetric(self) -> bool:
        return all(self.up[x] & self.down[x] == 1 << x for x in range(len(self.up)))

    def __eq__(self, other):
        if not isinstance(other, Preorder):
            return NotImplemented
        return self.points == other.points and self.up == other.up

    def __hash__(self):
        return hash((self.points, self.up))

    def __repr__(self):
        return f"Preorder(n={len(self.points)}, pairs={sum(1 for _ in self.pairs())})"


def transitive_closure(up: list[int]) -> list[int]:
    up = list(up)
    n = len(up)
    for k in range(n):
        bit = 1 << k
        row_k = up[k]
        for x in range(n):
            if up[x] & bit:
                up[x] |= row_k
    return up


def make_preorder(points, generator_edges) -> Preorder:
    """Smallest preorder containing the ``(x, y)`` edges (read ``x <= y``)."""
    points = tuple(points)
    index = {p: i for i, p in enumerate(points)}
    up = [1 << i for i in range(len(points))]
    for x, y in generator_edges:
        if x not in index or y not in index:
            raise InvalidSpace(f"edge ({x!r}, {y!r}) references an unknown point")
        up[index[x]] |= 1 << index[y]
    return Preorder(points, transitive_closure(up), check=False)


@dataclass(frozen=True)
class Classification:
    semiclosed: bool
    closed: bool
    convex: bool
    regular: bool
    normal: bool
    perfectly_normal: bool
    witnesses: dict = field(default_factory=dict, compare=False, repr=False)

    FLAGS = ("semiclosed", "closed", "convex", "regular", "normal", "perfectly_normal")

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.FLAGS}

    def chain_holds(self) -> bool:
        chain = [self.perfectly_normal, self.normal, self.regular, self.closed,
                 self.semiclosed]
        return all(b or not a for a, b in zip(chain, chain[1:]))


@dataclass(frozen=True, eq=False)
class PreorderedSpace:
    """A finite topology together with a preorder on the same points."""

    topology: FiniteTopology
    order: Preorder

    def __post_init__(self):
        if self.topology.points != self.order.points:
            raise InvalidSpace("topology and preorder disagree on the points")

    def __eq__(self, other):
        if not isinstance(other, PreorderedSpace):
            return NotImplemented
        return self.topology == other.topology and self.order == other.order

    def __hash__(self):
        return hash((self.topology, self.order))

    def __repr__(self):
        return f"PreorderedSpace(n={self.n}, opens={len(self.topology.opens)})"

    @property
    def points(self):
        return self.topology.points

    @property
    def n(self) -> int:
        return self.topology.n

    @property
    def full(self) -> int:
        return self.topology.full

    def mask(self, ids) -> int:
        return self.topology.mask(ids)

    def ids(self, mask: int) -> frozenset:
        return self.topology.ids(mask)

    @cached_property
    def flags(self) -> Classification:
        return classify(self)

    # -- hulls ---------------------------------------------------------------

    def inc_hull(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.order.up[i]
        return out

    def dec_hull(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.order.down[i]
        return out

    def is_increasing(self, mask: int) -> bool:
        return self.inc_hull(mask) == mask

    def is_decreasing(self, mask: int) -> bool:
        return self.dec_hull(mask) == mask

    def closed_inc_hull(self, mask: int) -> int:
        """``I(S)``: alternate closure and increasing hull until stable."""
        T = self.topology
        while True:
            nxt = T.closure(self.inc_hull(mask))
            if nxt == mask:
                return mask
            mask = nxt

    def closed_dec_hull(self, mask: int) -> int:
        T = self.topology
        while True:
            nxt = T.closure(self.dec_hull(mask))
            if nxt == mask:
                return mask
            mask = nxt

    def open_dec_hull(self, mask: int) -> int:
        """Smallest open decreasing superset.

        A set is open iff it contains the minimal neighbourhood of each of its
        points, and decreasing iff it contains each point's down-set, so the
        answer is a reachability closure.
        """
        T, down = self.topology, self.order.down
        frontier = mask
        while frontier:
            grow = 0
            for i in bits(frontier):
                grow |= T.nbhd(i) | down[i]
            frontier = grow & ~mask
            mask |= grow
        return mask

    def open_inc_hull(self, mask: int) -> int:
        T, up = self.topology, self.order.up
        frontier = mask
        while frontier:
            grow = 0
            for i in bits(frontier):
                grow |= T.nbhd(i) | up[i]
            frontier = grow & ~mask
            mask |= grow
        return mask

    def largest_open_inc_within(self, mask: int) -> int:
        T, up = self.topology, self.order.up
        while True:
            keep = mask
            for i in bits(mask):
                if (T.nbhd(i) | up[i]) & ~mask:
                    keep &= ~(1 << i)
            if keep == mask:
                return mask
            mask = keep

    def largest_open_dec_within(self, mask: int) -> int:
        T, down = self.topology, self.order.down
        while True:
            keep = mask
            for i in bits(mask):
                if (T.nbhd(i) | down[i]) & ~mask:
                    keep &= ~(1 << i)
            if keep == mask:
                return mask
            mask = keep

    # -- families ------------------------------------------------------------

    @cached_property
    def open_increasing(self) -> tuple[int, ...]:
        return tuple(o for o in self.topology.open_list() if self.is_increasing(o))

    @cached_property
    def open_decreasing(self) -> tuple[int, ...]:
        return tuple(o for o in self.topology.open_list() if self.is_decreasing(o))

    @cached_property
    def closed_decreasing(self) -> tuple[int, ...]:
        return tuple(sorted((self.full & ~o for o in self.open_increasing),
                            key=lambda m: (m.bit_count(), m)))

    @cached_property
    def closed_increasing(self) -> tuple[int, ...]:
        return tuple(sorted((self.full & ~o for o in self.open_decreasing),
                            key=lambda m: (m.bit_count(), m)))

    def restrict(self, mask: int) -> "PreorderedSpace":
        """Subspace with the induced topology and induced preorder."""
        positions = list(bits(mask))
        T = subspace(self.topology, mask)
        up = [restrict_mask(self.order.up[i], positions) for i in positions]
        return PreorderedSpace(T, Preorder(T.points, up, check=False))


def make_space(points, opens_or_topology, edges=()) -> PreorderedSpace:
    """Convenience constructor from a topology (or generators) and order edges."""
    from .topology import make_topology

    if isinstance(opens_or_topology, FiniteTopology):
        T = opens_or_topology
    else:
        T = make_topology(points, opens_or_topology)
    return PreorderedSpace(T, make_preorder(T.points, edges))


# -- module-level operations --------------------------------------------------

def inc_hull(ps: PreorderedSpace, S):
    m, as_ids = _coerce(ps.topology, S)
    return _out(ps.topology, ps.inc_hull(m), as_ids)


def dec_hull(ps: PreorderedSpace, S):
    m, as_ids = _coerce(ps.topology, S)
    return _out(ps.topology, ps.dec_hull(m), as_ids)


def closed_inc_hull(ps: PreorderedSpace, S):
    m, as_ids = _coerce(ps.topology, S)
    return _out(ps.topology, ps.closed_inc_hull(m), as_ids)


def closed_dec_hull(ps: PreorderedSpace, S):
    m, as_ids = _coerce(ps.topology, S)
    return _out(ps.topology, ps.closed_dec_hull(m), as_ids)


def enumerate_monotone_opens(ps: PreorderedSpace, direction: str) -> tuple[int, ...]:
    if direction == INCREASING:
        return ps.open_increasing
    if direction == DECREASING:
        return ps.open_decreasing
    raise ValueError(f"direction must be {INCREASING!r} or {DECREASING!r}")


def interpolate(ps: PreorderedSpace, F: int, V: int, direction: str) -> int | None:
    """Largest open monotone ``W`` with ``F <= W <= V``, or None.

    Searches the enumerated monotone opens; for a compact closed preordered
    space and monotone ``F`` inside open ``V`` the answer always exists.
    """
    W = 0
    for o in enumerate_monotone_opens(ps, direction):
        if o & ~V == 0:
            W |= o
    return W if F & ~W == 0 else None


def is_closed_preorder(ps: PreorderedSpace, method: str = "rectangles") -> bool:
    """Whether the graph of the preorder is closed in the square.

    ``rectangles``: every unrelated pair ``x, y`` has open neighbourhoods
    ``U, V`` with no ``u <= v`` across them (minimal neighbourhoods suffice).
    ``product``: build the product topology and test the graph's complement
    for openness; may raise ``TooLarge``.
    """
    T, up = ps.topology, ps.order.up
    if method == "rectangles":
        for x in range(ps.n):
            reach = ps.inc_hull(T.nbhd(x))
            for y in bits(ps.full & ~up[x]):
                if reach & T.nbhd(y):
                    return False
        return True
    if method == "product":
        P = product(T, T)
        n = ps.n
        graph = 0
        for x in range(n):
            for y in bits(up[x]):
                graph |= 1 << (x * n + y)
        return P.is_closed(graph)
    raise ValueError(f"unknown method {method!r}")


def is_semiclosed(ps: PreorderedSpace) -> bool:
    return semiclosed_witness(ps) is None


def exact_level_feasible(ps: PreorderedSpace, A: int, B: int) -> bool:
    """Is there a continuous isotone ``f`` with ``f^-1(0) = A``, ``f^-1(1) = B``?

    Continuous real functions on a finite space are exactly those constant on
    each specialization component.  Such an ``f`` exists iff ``A`` and ``B``
    are unions of components, ``A`` is down-closed and ``B`` up-closed in the
    preorder the order induces between components; then ``1/2`` works on
    every remaining component.
    """
    if A & B:
        return False
    comps = ps.topology.components()
    for S in (A, B):
        for c in comps:
            if c & S and c & ~S:
                return False
    k = len(comps)
    owner = {}
    for ci, c in enumerate(comps):
        for i in bits(c):
            owner[i] = ci
    rel = [1 << ci for ci in range(k)]
    for x, y in ps.order.pairs():
        rel[owner[x]] |= 1 << owner[y]
    rel = transitive_closure(rel)
    in_a = {ci for ci, c in enumerate(comps) if c & A}
    in_b = {ci for ci, c in enumerate(comps) if c & B}
    for ci in range(k):
        for cj in bits(rel[ci]):
            if cj in in_a and ci not in in_a:
                return False
            if ci in in_b and cj not in in_b:
                return False
    return True


def semiclosed_witness(ps: PreorderedSpace):
    T = ps.topology
    for x in range(ps.n):
        for hull, S in (("increasing", ps.order.up[x]), ("decreasing", ps.order.down[x])):
            limit = T.closure(S) & ~S
            if limit:
                return {"point": ps.points[x], "hull": hull,
                        "limit": ps.points[next(bits(limit))]}
    return None


def closed_witness(ps: PreorderedSpace):
    """An unrelated pair ``x, y`` with no separating rectangle, or None."""
    T, up = ps.topology, ps.order.up
    for x in range(ps.n):
        reach = ps.inc_hull(T.nbhd(x))
        for y in bits(ps.full & ~up[x]):
            if reach & T.nbhd(y):
                return {"pair": [ps.points[x], ps.points[y]]}
    return None


def convex_witness(ps: PreorderedSpace):
    """A point whose smallest open monotone neighbourhoods overshoot its
    minimal neighbourhood, or None.

    The smallest open decreasing and open increasing sets containing ``x``
    give the tightest ``U & V``, so they decide convexity at ``x``.
    """
    T = ps.topology
    for x in range(ps.n):
        meet = ps.open_dec_hull(1 << x) & ps.open_inc_hull(1 << x)
        if meet & ~T.nbhd(x):
            return {"point": ps.points[x]}
    return None


def regular_witness(ps: PreorderedSpace):
    """Point-versus-set failure of regularity (semiclosedness assumed)."""
    T = ps.topology
    cdec, cinc = ps.closed_decreasing, ps.closed_increasing
    for x in range(ps.n):
        bit = 1 << x
        ux, vx = ps.open_dec_hull(bit), ps.open_inc_hull(bit)
        for B in cinc:
            if not B & bit and ux & ps.open_inc_hull(B):
                return {"point": ps.points[x], "B": T.sorted_ids(B)}
        for A in cdec:
            if not A & bit and vx & ps.open_dec_hull(A):
                return {"point": ps.points[x], "A": T.sorted_ids(A)}
    return None


def normal_witness(ps: PreorderedSpace, exhaustive: bool = True):
    """A disjoint closed decreasing / closed increasing pair that no open
    monotone pair separates (semiclosedness assumed).

    Any separator contains the smallest open decreasing hull of A and the
    smallest open increasing hull of B, so those two decide each pair.
    Without ``exhaustive`` only the largest B disjoint from each A is tried.
    """
    T = ps.topology
    for A in ps.closed_decreasing:
        uA = ps.open_dec_hull(A)
        if exhaustive:
            candidates = [B for B in ps.closed_increasing if not A & B]
        else:
            candidates = [ps.full & ~uA]
        for B in candidates:
            if uA & ps.open_inc_hull(B):
                return {"A": T.sorted_ids(A), "B": T.sorted_ids(B)}
    return None


def perfectly_normal_witness(ps: PreorderedSpace, cross_check: bool = False):
    T = ps.topology
    for A in ps.closed_decreasing:
        for B in ps.closed_increasing:
            if A & B:
                continue
            ok = exact_level_feasible(ps, A, B)
            if cross_check:
                _cross_check_perfect(ps, A, B, ok)
            if not ok:
                return {"A": T.sorted_ids(A), "B": T.sorted_ids(B)}
    return None


def classify(ps: PreorderedSpace, *, exhaustive: bool = True,
             cross_check: bool = False) -> Classification:
    """Decide every flag of the separation hierarchy.

    With ``exhaustive`` the normality check runs over every disjoint pair of
    closed decreasing / closed increasing sets; otherwise only over the
    maximal pair for each closed decreasing set.  ``cross_check`` also runs
    the constructive exact-level separation on each pair and insists that it
    agrees with the component-level decision.
    """
    wit: dict = {}

    def decide(name, witness):
        if witness is not None:
            wit[name] = witness
        return witness is None

    semiclosed = decide("semiclosed", semiclosed_witness(ps))
    closed = decide("closed", closed_witness(ps))
    convex = decide("convex", convex_witness(ps))
    if semiclosed:
        regular = decide("regular", regular_witness(ps))
        normal = decide("normal", normal_witness(ps, exhaustive))
        perfect = decide("perfectly_normal",
                         perfectly_normal_witness(ps, cross_check))
    else:
        regular = normal = perfect = False
        for name in ("regular", "normal", "perfectly_normal"):
            wit[name] = {"reason": "not semiclosed"}

    result = Classification(semiclosed, closed, convex, regular, normal, perfect,
                            witnesses=wit)
    if not result.chain_holds():
        raise InternalError(f"implication chain violated: {result.as_dict()}")
    return result


def flag(ps: PreorderedSpace, name: str) -> bool:
    """Decide a single classification flag."""
    if name == "semiclosed":
        return semiclosed_witness(ps) is None
    if name == "closed":
        return is_closed_preorder(ps)
    if name == "convex":
        return convex_witness(ps) is None
    if name not in ("regular", "normal", "perfectly_normal"):
        raise ValueError(f"unknown flag {name!r}")
    if semiclosed_witness(ps) is not None:
        return False
    if name == "regular":
        return regular_witness(ps) is None
    if name == "normal":
        return normal_witness(ps) is None
    return perfectly_normal_witness(ps) is None


def _cross_check_perfect(ps, A, B, expected):
    from .errors import NotSeparable
    from .separation import perfectly_separate

    try:
        perfectly_separate(ps, A, B)
        found = True
    except NotSeparable:
        found = False
    if found != expected:
        raise InternalError("component-level decision and construction disagree")


@dataclass(frozen=True)
class SubspaceReport:
    subspace: PreorderedSpace
    semiclosed_inherited: bool
    closed_inherited: bool
    hull_identity: bool
    preordered_subspace: bool


def check_subspace_inheritance(ps: PreorderedSpace, S) -> SubspaceReport:
    """Compare a subspace with its ambient space.

    ``hull_identity``: every closed decreasing ``A`` of the subspace equals
    ``d(A) & S`` (and dually).  ``preordered_subspace``: every open monotone
    set of the subspace is the trace of an open monotone set of ``ps``.
    The ``*_inherited`` fields are implications (ambient flag implies
    subspace flag).
    """
    m, _ = _coerce(ps.topology, S)
    positions = list(bits(m))
    sub = ps.restrict(m)

    semiclosed_inh = (not is_semiclosed(ps)) or is_semiclosed(sub)
    closed_inh = (not is_closed_preorder(ps)) or is_closed_preorder(sub)

    hull_ok = True
    for A in sub.closed_decreasing:
        a = expand_mask(A, positions)
        if ps.dec_hull(a) & m != a:
            hull_ok = False
    for B in sub.closed_increasing:
        b = expand_mask(B, positions)
        if ps.inc_hull(b) & m != b:
            hull_ok = False

    traces_inc = {restrict_mask(o, positions) for o in ps.open_increasing}
    traces_dec = {restrict_mask(o, positions) for o in ps.open_decreasing}
    pre_ok = (all(o in traces_inc for o in sub.open_increasing)
              and all(o in traces_dec for o in sub.open_decreasing))
    return SubspaceReport(sub, semiclosed_inh, closed_inh, hull_ok, pre_ok)
