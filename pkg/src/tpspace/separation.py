"""Monotone separators, isotone Urysohn functions and extensions.

On a finite normal preordered space every closed monotone set is also open,
which is what lets the dyadic constructions below stop at finite depth and
still produce continuous functions: each level set is taken clopen.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (ConditionViolated, InternalError, InvalidInput,
                     NotSeparable)
from .functions import (HALF, ONE, ZERO, MonotoneFn, aligned, combine_alpha,
                        is_continuous, is_isotone, level_mask, weighted_sum)
from .preorder import DECREASING, INCREASING, PreorderedSpace, interpolate
from .topology import _coerce, bits


@dataclass(frozen=True)
class SeparatorPair:
    """Open decreasing ``U`` and open increasing ``V`` with empty meet."""

    U: int
    V: int
    route: str = field(default="", compare=False)

    def is_valid(self, ps: PreorderedSpace, A: int = 0, B: int = 0) -> bool:
        T = ps.topology
        return (not self.U & self.V
                and T.is_open(self.U) and ps.is_decreasing(self.U)
                and T.is_open(self.V) and ps.is_increasing(self.V)
                and A & ~self.U == 0 and B & ~self.V == 0)

    def as_ids(self, ps: PreorderedSpace) -> dict:
        T = ps.topology
        return {"U": T.sorted_ids(self.U), "V": T.sorted_ids(self.V)}


def _mask(ps: PreorderedSpace, S) -> int:
    return _coerce(ps.topology, S)[0]


def check_pair(ps: PreorderedSpace, A: int, B: int) -> None:
    """Raise ``InvalidInput`` unless A is closed decreasing, B closed
    increasing and the two are disjoint."""
    T = ps.topology
    if not (T.is_closed(A) and ps.is_decreasing(A)):
        raise InvalidInput(f"A = {T.sorted_ids(A)} is not closed decreasing")
    if not (T.is_closed(B) and ps.is_increasing(B)):
        raise InvalidInput(f"B = {T.sorted_ids(B)} is not closed increasing")
    if A & B:
        raise InvalidInput("A and B intersect")


# -- separators ---------------------------------------------------------------

def _separate_by_rectangles(ps: PreorderedSpace, A: int, B: int):
    """Compactness argument over the finite covers, then interpolation.

    For ``x`` in A and ``y`` in B the pair (y, x) lies off the graph; its
    rectangle witness ``U_y x U_x`` yields the decreasing neighbourhood
    ``d(U_x)`` of x and the increasing neighbourhood ``i(U_y)`` of y.
    Returns None when some pair has no rectangle witness.
    """
    T = ps.topology
    U_prime, V_prime = 0, ps.full
    for x in bits(A):
        Ux = T.nbhd(x)
        U_x, V_x = ps.full, 0
        for y in bits(B):
            Uy = T.nbhd(y)
            if ps.inc_hull(Uy) & Ux:
                return None
            U_x &= ps.dec_hull(Ux)
            V_x |= ps.inc_hull(Uy)
        U_prime |= U_x
        V_prime &= V_x
    if not A:
        U_prime, V_prime = 0, ps.full
    if U_prime & V_prime:
        return None
    U = interpolate(ps, A, T.interior(U_prime), DECREASING)
    V = interpolate(ps, B, T.interior(V_prime), INCREASING)
    if U is None or V is None or U & V:
        return None
    return U, V


def brute_force_separate(ps: PreorderedSpace, A: int, B: int) -> SeparatorPair:
    """Search all open decreasing / open increasing pairs.

    Returns the pair with the least ``|U| + |V|``, ties broken by the bit
    encodings.
    """
    best = None
    for U in ps.open_decreasing:
        if A & ~U:
            continue
        for V in ps.open_increasing:
            if B & ~V or U & V:
                continue
            key = (U.bit_count() + V.bit_count(), U, V)
            if best is None or key < best:
                best = key
    if best is None:
        raise NotSeparable("no open monotone separator exists")
    return SeparatorPair(best[1], best[2], route="brute-force")


def separate(ps: PreorderedSpace, A, B, method: str = "proof") -> SeparatorPair:
    """Disjoint open decreasing ``U >= A`` and open increasing ``V >= B``.

    ``proof`` follows the compactness construction and falls back to the
    exhaustive search when the preorder is not closed.  Whenever any
    separator exists, the smallest open decreasing hull of A and the smallest
    open increasing hull of B form one, and that canonical pair is returned.
    """
    A, B = _mask(ps, A), _mask(ps, B)
    check_pair(ps, A, B)
    if method == "brute-force":
        return brute_force_separate(ps, A, B)
    if method not in ("proof", "minimal"):
        raise ValueError(f"unknown method {method!r}")
    route = "minimal"
    if method == "proof":
        found = _separate_by_rectangles(ps, A, B)
        if found is None:
            brute_force_separate(ps, A, B)
            route = "brute-force"
        else:
            route = "proof"
    U, V = ps.open_dec_hull(A), ps.open_inc_hull(B)
    if U & V:
        raise NotSeparable("no open monotone separator exists")
    return SeparatorPair(U, V, route=route)


def separate_via_regularity(ps: PreorderedSpace, A, B) -> SeparatorPair:
    """Separator assembled from point-wise regularity witnesses.

    Each ``x`` in A gets an open decreasing ``U_x`` with ``D(U_x)`` missing B,
    each ``y`` in B an open increasing ``V_y`` with ``I(V_y)`` missing A; the
    sets ``W_n = U_n - (I(V_1) | ... | I(V_{n-1}))`` and
    ``E_n = V_n - (D(U_1) | ... | D(U_n))`` then have disjoint unions.
    """
    A, B = _mask(ps, A), _mask(ps, B)
    check_pair(ps, A, B)

    def witness(x, hull, closed_hull, avoid, family):
        cand = hull(1 << x)
        if not closed_hull(cand) & avoid:
            return cand
        for o in family:
            if o >> x & 1 and not closed_hull(o) & avoid:
                return o
        raise NotSeparable(f"no regularity witness at {ps.points[x]!r}")

    Us, Vs = [], []
    for x in bits(A):
        u = witness(x, ps.open_dec_hull, ps.closed_dec_hull, B, ps.open_decreasing)
        if u not in Us:
            Us.append(u)
    for y in bits(B):
        v = witness(y, ps.open_inc_hull, ps.closed_inc_hull, A, ps.open_increasing)
        if v not in Vs:
            Vs.append(v)

    I_V = [ps.closed_inc_hull(v) for v in Vs]
    D_U = [ps.closed_dec_hull(u) for u in Us]
    U_total, V_total = 0, 0
    for n in range(max(len(Us), len(Vs))):
        if n < len(Us):
            removed = 0
            for m in I_V[:n]:
                removed |= m
            U_total |= Us[n] & ~removed
        if n < len(Vs):
            removed = 0
            for m in D_U[:n + 1]:
                removed |= m
            V_total |= Vs[n] & ~removed
    pair = SeparatorPair(U_total, V_total, route="regularity")
    if not pair.is_valid(ps, A, B):
        raise InternalError("regularity construction produced an invalid pair")
    return pair


# -- isotone functions ---------------------------------------------------------

def _clopen_dec(ps: PreorderedSpace, U: int) -> int:
    C = ps.closed_dec_hull(U)
    if not ps.topology.is_open(C):
        raise NotSeparable("closed decreasing hull of a separator is not open; "
                           "the space is not normally preordered")
    return C


def _level_function(ps: PreorderedSpace, chain, top) -> MonotoneFn:
    """``x -> min{r : x in U_r}``, or ``top`` outside every ``U_r``."""
    out = []
    for i in range(ps.n):
        for r, U in chain:
            if U >> i & 1:
                out.append(r)
                break
        else:
            out.append(top)
    return MonotoneFn(ps.points, out)


def urysohn(ps: PreorderedSpace, A, B, depth: int | None = None) -> MonotoneFn:
    """Continuous isotone ``f`` with ``f = 0`` on A and ``f = 1`` on B.

    Dyadic chain of clopen decreasing sets ``U_r`` between ``U_0 >= A`` and
    the complement of B, refined ``depth`` times (default: number of points).
    Adjacent equal sets are merged so only genuine insertions cost a
    separation.  With A and B both empty the answer is the constant 1/2.
    """
    A, B = _mask(ps, A), _mask(ps, B)
    check_pair(ps, A, B)
    if not A and not B:
        return MonotoneFn.constant(ps.points, HALF)
    depth = ps.n if depth is None else depth
    ceiling = ps.full & ~B
    chain = [(ZERO, _clopen_dec(ps, separate(ps, A, B).U))]
    step = ONE
    for _ in range(depth):
        step /= 2
        refined = []
        bounds = chain + [(ONE, ceiling)]
        for (r, lower), (_, upper) in zip(bounds, bounds[1:]):
            refined.append((r, lower))
            if lower == upper:
                continue
            mid = _clopen_dec(ps, separate(ps, lower, ps.full & ~upper).U)
            if lower & ~mid or mid & ~upper:
                raise InternalError("dyadic chain is not nested")
            refined.append((r + step, mid))
        chain = [refined[0]]
        for r, U in refined[1:]:
            if U != chain[-1][1]:
                chain.append((r, U))
    f = _level_function(ps, chain, ONE)
    vals = aligned(ps, f)
    if any(vals[i] != 0 for i in bits(A)) or any(vals[i] != 1 for i in bits(B)):
        raise InternalError("urysohn function misses its pins")
    return f


# -- extension --------------------------------------------------------------------

def _sub_function(ps: PreorderedSpace, S: int | None, f: MonotoneFn):
    """Resolve the domain mask of ``f`` and check it against ``S``."""
    dom = ps.mask(f.points)
    if S is not None and _mask(ps, S) != dom:
        raise InvalidInput("function domain does not match S")
    return dom


def _check_on_subspace(ps: PreorderedSpace, dom: int, f: MonotoneFn) -> None:
    if not dom:
        return
    sub = ps.restrict(dom)
    g = MonotoneFn(sub.points, [f[p] for p in sub.points])
    if not is_continuous(sub, g):
        raise InvalidInput("function is not continuous on its subspace")
    if not is_isotone(sub, g):
        raise InvalidInput("function is not isotone on its subspace")


def extension_witness(ps: PreorderedSpace, f: MonotoneFn):
    """First ``(xi, xi', point)`` breaking the extension condition, or None.

    Only consecutive values need checking: lowering ``xi`` or raising
    ``xi'`` shrinks both hulls.
    """
    vals = {ps.topology.index(p): f[p] for p in f.points}
    levels = sorted(set(vals.values()))
    for lo, hi in zip(levels, levels[1:]):
        below = sum(1 << i for i, v in vals.items() if v <= lo)
        above = sum(1 << i for i, v in vals.items() if v >= hi)
        meet = ps.closed_dec_hull(below) & ps.closed_inc_hull(above)
        if meet:
            point = ps.points[next(bits(meet))]
            return lo, hi, point
    return None


def check_extension_condition(ps: PreorderedSpace, S, f: MonotoneFn) -> bool:
    """Do the closed hulls of every lower and upper level set stay apart?"""
    dom = _sub_function(ps, S, f)
    _check_on_subspace(ps, dom, f)
    return extension_witness(ps, f) is None


def _extend_to_closure(ps: PreorderedSpace, dom: int, vals: dict) -> dict:
    """Extend by the common value ``f`` takes near each limit point."""
    T = ps.topology
    out = dict(vals)
    for x in bits(T.closure(dom) & ~dom):
        near = {vals[i] for i in bits(T.nbhd(x) & dom)}
        if len(near) != 1:
            lo, hi = min(near), max(near)
            raise ConditionViolated("function oscillates at a limit point",
                                    xi=lo, xi_prime=hi, point=ps.points[x])
        out[x] = near.pop()
    return out


def extend_isotone(ps: PreorderedSpace, S, f: MonotoneFn) -> MonotoneFn:
    """Continuous isotone ``F`` on the whole space with ``F|S = f``.

    ``f`` is first carried to the closure of S, then a nested chain of clopen
    decreasing sets ``C_0 <= C_1 <= ...`` is threaded between the closed
    decreasing hull of each lower level set and the closed increasing hull of
    the next upper one; ``F`` takes the i-th value on ``C_i - C_{i-1}``.
    """
    dom = _sub_function(ps, S, f)
    _check_on_subspace(ps, dom, f)
    wit = extension_witness(ps, f)
    if wit is not None:
        xi, xi_p, point = wit
        raise ConditionViolated(
            f"D(f^-1[0,{xi}]) meets I(f^-1[{xi_p},1]) at {point!r}",
            xi=xi, xi_prime=xi_p, point=point)
    if not dom:
        return MonotoneFn.constant(ps.points, HALF)

    vals = {ps.topology.index(p): f[p] for p in f.points}
    vals = _extend_to_closure(ps, dom, vals)
    levels = sorted(set(vals.values()))
    chain = []
    prev = 0
    for lo, hi in zip(levels, levels[1:]):
        below = sum(1 << i for i, v in vals.items() if v <= lo)
        above = sum(1 << i for i, v in vals.items() if v >= hi)
        lower = ps.closed_dec_hull(below) | prev
        upper = ps.closed_inc_hull(above)
        if lower & upper:
            raise InternalError("closure extension broke the level condition")
        prev = _clopen_dec(ps, separate(ps, lower, upper).U)
        chain.append((lo, prev))
    F = _level_function(ps, chain, levels[-1])

    Fv = aligned(ps, F)
    if any(Fv[ps.topology.index(p)] != f[p] for p in f.points):
        raise InternalError("extension does not restrict to f")
    if not (is_continuous(ps, F) and is_isotone(ps, F)):
        raise InternalError("extension is not continuous isotone")
    return F


def extend_with_pinning(ps: PreorderedSpace, K, f: MonotoneFn, A, B) -> MonotoneFn:
    """Extend ``f`` from K while forcing ``F = 0`` on A and ``F = 1`` on B."""
    A, B = _mask(ps, A), _mask(ps, B)
    check_pair(ps, A, B)
    dom = _sub_function(ps, K, f)
    _check_on_subspace(ps, dom, f)
    T = ps.topology
    for p in f.points:
        i = T.index(p)
        if A >> i & 1 and f[p] != 0:
            raise InvalidInput(f"{p!r} lies in A but f({p!r}) = {f[p]}")
        if B >> i & 1 and f[p] != 1:
            raise InvalidInput(f"{p!r} lies in B but f({p!r}) = {f[p]}")
    wider = A | dom | B
    pinned = {}
    for i in bits(wider):
        p = ps.points[i]
        if p in f:
            pinned[p] = f[p]
        else:
            pinned[p] = ZERO if A >> i & 1 else ONE
    f_wide = MonotoneFn(list(pinned), list(pinned.values()))
    _check_on_subspace(ps, wider, f_wide)
    F = extend_isotone(ps, wider, f_wide)
    Fv = aligned(ps, F)
    if any(Fv[i] != 0 for i in bits(A)) or any(Fv[i] != 1 for i in bits(B)):
        raise InternalError("pinned extension misses its pins")
    return F


# -- exact level sets --------------------------------------------------------------

def perfectly_separate(ps: PreorderedSpace, A, B) -> MonotoneFn:
    """Continuous isotone ``f`` with ``f^-1(0) = A`` and ``f^-1(1) = B``.

    Uses the minimal neighbourhoods as the countable base.  For every base
    set O whose closed increasing hull misses A an Urysohn function
    separating A from ``I(O)`` is built; their normalised weighted sum
    vanishes exactly on A.  The dual sum equals one exactly on B, and the two
    are merged with :func:`combine_alpha`.
    """
    A, B = _mask(ps, A), _mask(ps, B)
    check_pair(ps, A, B)
    T = ps.topology
    base = sorted({T.nbhd(i) for i in range(ps.n)}, key=lambda m: (m.bit_count(), m))

    # distinct base sets often share a hull; one function per hull is enough
    inc_targets = list(dict.fromkeys(ps.closed_inc_hull(O) for O in base))
    dec_targets = list(dict.fromkeys(ps.closed_dec_hull(O) for O in base))
    lows = [urysohn(ps, A, C) for C in inc_targets if not A & C]
    highs = [urysohn(ps, C, B) for C in dec_targets if not B & C]
    g = weighted_sum(lows) if lows else MonotoneFn.constant(ps.points, ZERO)
    h = weighted_sum(highs) if highs else MonotoneFn.constant(ps.points, ONE)

    gv, hv = aligned(ps, g), aligned(ps, h)
    if level_mask(gv, lambda v: v == 0) != A:
        raise NotSeparable("A is not the zero set of a continuous isotone function")
    if level_mask(hv, lambda v: v == 1) != B:
        raise NotSeparable("B is not the one set of a continuous isotone function")
    f = combine_alpha(ps, g, h)
    fv = aligned(ps, f)
    if (level_mask(fv, lambda v: v == 0) != A or level_mask(fv, lambda v: v == 1) != B
            or not is_continuous(ps, f) or not is_isotone(ps, f)):
        raise InternalError("combined function has the wrong level sets")
    return f


def threshold_pair(ps: PreorderedSpace, F: MonotoneFn, t=HALF) -> SeparatorPair:
    """``({F < t}, {F > t})``: open decreasing and open increasing sets."""
    vals = aligned(ps, F)
    t = Fraction(t)
    return SeparatorPair(level_mask(vals, lambda v: v < t),
                         level_mask(vals, lambda v: v > t), route="threshold")
