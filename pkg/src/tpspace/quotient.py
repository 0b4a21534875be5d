"""The indifference quotient ``E/~`` with its quotient topology and order."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalError, InvalidSpace
from .preorder import (Classification, Preorder, PreorderedSpace, classify,
                       is_closed_preorder)
from .topology import FiniteTopology, bits, quotient_topology

CLASS_SEPARATOR = "~"


def class_id(members) -> str:
    """Canonical class id: sorted member ids joined by ``~``."""
    names = sorted(str(p) for p in members)
    return CLASS_SEPARATOR.join(names)


def indifference_classes(ps: PreorderedSpace) -> list[frozenset]:
    """Classes of ``x ~ y`` (``x <= y`` and ``y <= x``), by first member."""
    seen = 0
    classes = []
    for x in range(ps.n):
        if seen >> x & 1:
            continue
        cls = ps.order.up[x] & ps.order.down[x]
        seen |= cls
        classes.append(ps.ids(cls))
    return classes


@dataclass(frozen=True)
class QuotientPresentation:
    classes: tuple
    projection: dict
    quotient_space: PreorderedSpace

    def class_masks(self, ps: PreorderedSpace) -> list[int]:
        return [ps.mask(c) for c in self.classes]


def quotient_space(ps: PreorderedSpace) -> QuotientPresentation:
    """Quotient by indifference; the induced order is checked antisymmetric
    and the projection continuous and order-preserving."""
    classes = indifference_classes(ps)
    ids = [class_id(c) for c in classes]
    projection = {}
    for cid, members in zip(ids, classes):
        for p in members:
            projection[p] = cid
    T = quotient_topology(ps.topology, projection)
    where = {cid: k for k, cid in enumerate(T.points)}
    up = [0] * len(ids)
    for x in range(ps.n):
        cx = where[projection[ps.points[x]]]
        for y in bits(ps.order.up[x]):
            up[cx] |= 1 << where[projection[ps.points[y]]]
    order = Preorder(T.points, up)
    if not order.is_antisymmetric():
        raise InternalError("quotient preorder is not an order")
    q = PreorderedSpace(T, order)
    pres = QuotientPresentation(tuple(classes), projection, q)
    if not projection_is_continuous(ps, pres):
        raise InternalError("quotient projection is not continuous")
    return pres


def _preimage(ps: PreorderedSpace, pres: QuotientPresentation, qmask: int) -> int:
    q = pres.quotient_space
    wanted = q.ids(qmask)
    return ps.mask(p for p in ps.points if pres.projection[p] in wanted)


def projection_is_continuous(ps, pres) -> bool:
    return all(ps.topology.is_open(_preimage(ps, pres, o))
               for o in pres.quotient_space.topology.opens)


def order_reflected(ps: PreorderedSpace, pres: QuotientPresentation) -> bool:
    """``x <= y`` iff ``[x] <= [y]`` for every pair of points."""
    q = pres.quotient_space
    idx = {cid: q.topology.index(cid) for cid in q.points}
    for x in range(ps.n):
        cx = idx[pres.projection[ps.points[x]]]
        for y in range(ps.n):
            cy = idx[pres.projection[ps.points[y]]]
            if ps.order.leq(x, y) != q.order.leq(cx, cy):
                return False
    return True


@dataclass(frozen=True)
class RemarkReport:
    space: Classification
    quotient: Classification
    semiclosed_agrees: bool
    regular_agrees: bool
    normal_agrees: bool
    monotone_sets_correspond: bool

    @property
    def all_hold(self) -> bool:
        return (self.semiclosed_agrees and self.regular_agrees
                and self.normal_agrees and self.monotone_sets_correspond)


def _monotone_correspondence(ps: PreorderedSpace, pres: QuotientPresentation) -> bool:
    """Open/closed monotone sets of ``E`` are exactly the preimages of those
    of ``E/~``."""
    q = pres.quotient_space
    families = [
        (ps.open_increasing, q.open_increasing),
        (ps.open_decreasing, q.open_decreasing),
        (ps.closed_increasing, q.closed_increasing),
        (ps.closed_decreasing, q.closed_decreasing),
    ]
    for upstairs, downstairs in families:
        pulled = {_preimage(ps, pres, m) for m in downstairs}
        if pulled != set(upstairs):
            return False
    return True


def check_remark_equivalences(ps: PreorderedSpace) -> RemarkReport:
    """Classify ``E`` and ``E/~`` independently and compare."""
    pres = quotient_space(ps)
    left = classify(ps)
    right = classify(pres.quotient_space)
    return RemarkReport(
        left, right,
        left.semiclosed == right.semiclosed,
        left.regular == right.regular,
        left.normal == right.normal,
        _monotone_correspondence(ps, pres),
    )


@dataclass(frozen=True)
class QuotientClosedReport:
    closed: bool
    antisymmetric: bool

    @property
    def closed_ordered(self) -> bool:
        return self.closed and self.antisymmetric


def check_quotient_closed(ps: PreorderedSpace) -> QuotientClosedReport:
    q = quotient_space(ps).quotient_space
    return QuotientClosedReport(is_closed_preorder(q), q.order.is_antisymmetric())


@dataclass(frozen=True)
class QuotientMapReport:
    topology: FiniteTopology
    matches_candidate: bool | None


def quotient_by_map(T_source: FiniteTopology, target_points, mapping,
                    candidate: FiniteTopology | None = None) -> QuotientMapReport:
    """Quotient topology on ``target_points`` induced by a surjection.

    With a ``candidate`` topology on the same targets, also reports whether
    it is the quotient topology.
    """
    target_points = list(target_points)
    for p in T_source.points:
        if p not in mapping:
            raise InvalidSpace(f"map is not total: {p!r} unmapped")
        if mapping[p] not in target_points:
            raise InvalidSpace(f"{p!r} maps outside the target")
    image = {mapping[p] for p in T_source.points}
    missing = [t for t in target_points if t not in image]
    if missing:
        raise InvalidSpace(f"map is not surjective: {missing!r} not hit")
    Q = quotient_topology(T_source, mapping)
    # reorder classes into the caller's target order
    pos = [Q.index(t) for t in target_points]
    opens = set()
    for o in Q.opens:
        m = 0
        for k, i in enumerate(pos):
            if o >> i & 1:
                m |= 1 << k
        opens.add(m)
    topo = FiniteTopology(target_points, opens, limit=max(len(target_points), 1),
                          check=False)
    matches = None
    if candidate is not None:
        matches = candidate == topo
    return QuotientMapReport(topo, matches)
