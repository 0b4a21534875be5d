"""Exact-rational functions into [0, 1] on finite preordered spaces."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InvalidInput
from .preorder import PreorderedSpace
from .topology import bits

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class MonotoneFn:
    """A total map from points to rationals in [0, 1].

    The name follows the role these maps play (candidate isotone functions);
    monotonicity is a predicate checked against a space, not an invariant.
    """

    __slots__ = ("points", "values", "_index")

    def __init__(self, points: Sequence, values: Sequence):
        self.points = tuple(points)
        self.values = tuple(Fraction(v) for v in values)
        if len(self.points) != len(self.values):
            raise InvalidInput("one value per point is required")
        for v in self.values:
            if not ZERO <= v <= ONE:
                raise InvalidInput(f"value {v} outside [0, 1]")
        self._index = {p: i for i, p in enumerate(self.points)}
        if len(self._index) != len(self.points):
            raise InvalidInput("duplicate points")

    @classmethod
    def from_mapping(cls, mapping: Mapping) -> "MonotoneFn":
        return cls(list(mapping), list(mapping.values()))

    @classmethod
    def constant(cls, points, value) -> "MonotoneFn":
        points = tuple(points)
        return cls(points, [value] * len(points))

    def __getitem__(self, p) -> Fraction:
        return self.values[self._index[p]]

    def __contains__(self, p) -> bool:
        return p in self._index

    def __len__(self):
        return len(self.points)

    def as_dict(self) -> dict:
        return dict(zip(self.points, self.values))

    def restrict(self, points) -> "MonotoneFn":
        points = [p for p in self.points if p in set(points)]
        return MonotoneFn(points, [self[p] for p in points])

    def __eq__(self, other):
        if not isinstance(other, MonotoneFn):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __hash__(self):
        return hash(frozenset(self.as_dict().items()))

    def __repr__(self):
        body = ", ".join(f"{p!r}: {v}" for p, v in zip(self.points, self.values))
        return f"MonotoneFn({{{body}}})"


def aligned(ps: PreorderedSpace, f: MonotoneFn) -> list[Fraction]:
    """Values of ``f`` listed in the order of ``ps.points``."""
    if len(f) != ps.n or any(p not in f for p in ps.points):
        raise InvalidInput("function is not total on the space")
    return [f[p] for p in ps.points]


def from_values(ps: PreorderedSpace, values: Sequence) -> MonotoneFn:
    return MonotoneFn(ps.points, values)


def level_mask(values: Sequence[Fraction], pred) -> int:
    m = 0
    for i, v in enumerate(values):
        if pred(v):
            m |= 1 << i
    return m


def is_continuous(ps: PreorderedSpace, f: MonotoneFn, method: str = "rays") -> bool:
    """Whether every open subset of [0, 1] pulls back to an open set.

    ``rays``: with finitely many values it is enough that the open rays below
    and above each midpoint between consecutive values pull back to opens.
    ``components``: ``f`` is constant on every specialization component.
    """
    vals = aligned(ps, f)
    T = ps.topology
    if method == "rays":
        levels = sorted(set(vals))
        for lo, hi in zip(levels, levels[1:]):
            t = (lo + hi) / 2
            if not T.is_open(level_mask(vals, lambda v: v < t)):
                return False
            if not T.is_open(level_mask(vals, lambda v: v > t)):
                return False
        return True
    if method == "components":
        for comp in T.components():
            if len({vals[i] for i in bits(comp)}) > 1:
                return False
        return True
    raise ValueError(f"unknown method {method!r}")


def is_isotone(ps: PreorderedSpace, f: MonotoneFn) -> bool:
    vals = aligned(ps, f)
    return all(vals[x] <= vals[y] for x, y in ps.order.pairs())


def is_utility(ps: PreorderedSpace, f: MonotoneFn) -> bool:
    """Indifferent points share a value; strictly better points score higher."""
    vals = aligned(ps, f)
    leq = ps.order.leq
    for x, y in ps.order.pairs():
        if leq(y, x):
            if vals[x] != vals[y]:
                return False
        elif not vals[x] < vals[y]:
            return False
    return True


def alpha(x: Fraction, y: Fraction) -> Fraction:
    """``1 / (1 + (1 - y) / x)`` on the unit square minus the corner (0, 1).

    Equal to ``x / (x + 1 - y)``; vanishes exactly on ``x = 0`` and equals one
    exactly on ``y = 1``.
    """
    x, y = Fraction(x), Fraction(y)
    if x == 0 and y == 1:
        raise InvalidInput("alpha is undefined at the corner (0, 1)")
    return x / (x + 1 - y)


def combine_alpha(ps: PreorderedSpace, g: MonotoneFn, h: MonotoneFn) -> MonotoneFn:
    """Merge ``g`` and ``h`` pointwise through :func:`alpha`.

    The result is continuous isotone with zero set ``g^-1(0)`` and one set
    ``h^-1(1)``.
    """
    gv, hv = aligned(ps, g), aligned(ps, h)
    for fn in (g, h):
        if not (is_continuous(ps, fn) and is_isotone(ps, fn)):
            raise InvalidInput("combine_alpha needs continuous isotone inputs")
    out = []
    for p, a, b in zip(ps.points, gv, hv):
        if a == 0 and b == 1:
            raise InvalidInput(f"g = 0 and h = 1 at {p!r}")
        out.append(alpha(a, b))
    return MonotoneFn(ps.points, out)


def weighted_sum(fs: Sequence[MonotoneFn]) -> MonotoneFn:
    """Normalised truncated series ``sum 2^-k f_k / sum 2^-k`` (k from 1).

    Zero exactly where every ``f_k`` is zero, one exactly where every
    ``f_k`` is one.
    """
    if not fs:
        raise InvalidInput("weighted_sum of an empty family")
    points = fs[0].points
    if any(set(f.points) != set(points) for f in fs[1:]):
        raise InvalidInput("weighted_sum needs functions on the same points")
    weights = [Fraction(1, 2 ** k) for k in range(1, len(fs) + 1)]
    total = sum(weights)
    out = []
    for p in points:
        out.append(sum(w * f[p] for w, f in zip(weights, fs)) / total)
    return MonotoneFn(points, out)
