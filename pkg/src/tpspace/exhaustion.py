"""Finite horizons of compact exhaustions ``K_1 <= K_2 <= ... <= K_J``.

A k_omega-space is determined by an admissible chain of compact pieces.  At
desk scale each piece is a finite closed preordered space and the chain is
cut off at an explicit horizon; the streaming constructions below consume
the pieces in order and never look back.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import InternalError, InvalidInput, TPSError
from .functions import MonotoneFn, aligned, is_continuous, is_isotone
from .preorder import PreorderedSpace, is_closed_preorder
from .separation import check_pair, extend_with_pinning, separate
from .topology import bits, restrict_mask


@dataclass(frozen=True, eq=False)
class Exhaustion:
    """Pieces plus per-step point maps ``K_j -> K_{j+1}``.

    ``inclusions[j]`` maps point ids of ``pieces[j]`` to point ids of
    ``pieces[j + 1]``; when omitted the ids themselves are used.
    """

    pieces: tuple
    inclusions: tuple = ()

    def __post_init__(self):
        if not self.pieces:
            raise InvalidInput("an exhaustion needs at least one piece")
        if not self.inclusions:
            incl = tuple({p: p for p in K.points} for K in self.pieces[:-1])
            object.__setattr__(self, "inclusions", incl)
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if len(self.inclusions) != len(self.pieces) - 1:
            raise InvalidInput("need one inclusion per step")

    def __len__(self):
        return len(self.pieces)

    def positions(self, j: int) -> list[int]:
        """Indices in ``K_{j+1}`` of the points of ``K_j``."""
        nxt = self.pieces[j + 1].topology
        incl = self.inclusions[j]
        return [nxt.index(incl[p]) for p in self.pieces[j].points]

    def embed(self, j: int, mask: int) -> int:
        """Image in ``K_{j+1}`` of a subset of ``K_j``."""
        pos = self.positions(j)
        out = 0
        for k in bits(mask):
            out |= 1 << pos[k]
        return out

    def pullback(self, j: int, mask: int) -> int:
        """Trace on ``K_j`` of a subset of ``K_{j+1}``."""
        return restrict_mask(mask, self.positions(j))

    def trace_on(self, s: int, mask: int, level: int) -> int:
        """Trace on ``K_s`` of a subset of ``K_level`` (``s <= level``)."""
        for j in range(level - 1, s - 1, -1):
            mask = self.pullback(j, mask)
        return mask


@dataclass(frozen=True)
class ExhaustionReport:
    valid: bool
    step: int | None = None
    reason: str = ""


def validate_exhaustion(exh: Exhaustion) -> ExhaustionReport:
    """Check each piece is closed preordered and carries the structure
    induced from the next one."""
    for j, K in enumerate(exh.pieces):
        if not is_closed_preorder(K):
            return ExhaustionReport(False, j, "piece is not closed preordered")
        if j + 1 == len(exh):
            break
        nxt = exh.pieces[j + 1]
        incl = exh.inclusions[j]
        if set(incl) != set(K.points):
            return ExhaustionReport(False, j, "inclusion is not total")
        targets = list(incl.values())
        if len(set(targets)) != len(targets):
            return ExhaustionReport(False, j, "inclusion is not injective")
        if any(t not in nxt.topology._index for t in targets):
            return ExhaustionReport(False, j, "inclusion leaves the next piece")
        pos = exh.positions(j)
        induced = {restrict_mask(o, pos) for o in nxt.topology.opens}
        if induced != set(K.topology.opens):
            return ExhaustionReport(False, j, "topology differs from the induced one")
        for x, p in enumerate(pos):
            if restrict_mask(nxt.order.up[p], pos) != K.order.up[x]:
                return ExhaustionReport(False, j, "preorder differs from the induced one")
    return ExhaustionReport(True)


@dataclass(frozen=True)
class TraceStep:
    tilde_A: int
    tilde_B: int
    U: int
    V: int


@dataclass(frozen=True)
class SeparationTrace:
    exhaustion: Exhaustion = field(repr=False)
    steps: tuple

    def to_json(self) -> list[dict]:
        out = []
        for K, st in zip(self.exhaustion.pieces, self.steps):
            T = K.topology
            out.append({name: T.sorted_ids(getattr(st, name))
                        for name in ("tilde_A", "tilde_B", "U", "V")})
        return out

    def violations(self) -> list[str]:
        """Every broken trace invariant, as readable strings."""
        exh = self.exhaustion
        bad = []
        for j, (K, st) in enumerate(zip(exh.pieces, self.steps)):
            T = K.topology
            if st.U & st.V:
                bad.append(f"step {j}: U and V meet")
            if st.tilde_A & ~st.U:
                bad.append(f"step {j}: tilde_A not inside U")
            if st.tilde_B & ~st.V:
                bad.append(f"step {j}: tilde_B not inside V")
            if not (T.is_open(st.U) and K.is_decreasing(st.U)):
                bad.append(f"step {j}: U not open decreasing")
            if not (T.is_open(st.V) and K.is_increasing(st.V)):
                bad.append(f"step {j}: V not open increasing")
            if K.closed_dec_hull(st.U) & K.closed_inc_hull(st.V):
                bad.append(f"step {j}: D(U) meets I(V)")
            if j + 1 < len(self.steps):
                nxt = self.steps[j + 1]
                if exh.embed(j, st.U) & ~nxt.U:
                    bad.append(f"step {j}: U not carried into the next U")
                if exh.embed(j, st.V) & ~nxt.tilde_B:
                    bad.append(f"step {j}: V not inside the next tilde_B")
                if exh.embed(j, st.V) & ~nxt.V:
                    bad.append(f"step {j}: V not carried into the next V")
        return bad


def _coherent(exh: Exhaustion, family: Sequence[int], name: str) -> None:
    for j in range(len(exh) - 1):
        if exh.pullback(j, family[j + 1]) != family[j]:
            raise InvalidInput(f"{name} is not coherent at step {j}")


def _masks(exh: Exhaustion, family) -> list[int]:
    if len(family) != len(exh):
        raise InvalidInput("need one subset per piece")
    out = []
    for K, S in zip(exh.pieces, family):
        out.append(S if isinstance(S, int) else K.mask(S))
    return out


def stream_separate(exh: Exhaustion, A_per_piece, B_per_piece) -> SeparationTrace:
    """Grow nested separators piece by piece.

    At step j the targets are the given ``A_j``, ``B_j`` enlarged by the
    hulls of the previous closed separators.  Two separations give open
    monotone ``U_j``, ``V_j`` whose closed hulls ``D_j(U_j)`` and ``I_j(V_j)``
    are disjoint: first separate the targets, then separate ``D_j(U_j)``
    from the increasing target.
    """
    A, B = _masks(exh, A_per_piece), _masks(exh, B_per_piece)
    _coherent(exh, A, "A")
    _coherent(exh, B, "B")
    steps = []
    tA, tB = A[0], B[0]
    for j, K in enumerate(exh.pieces):
        try:
            check_pair(K, tA, tB)
            U = separate(K, tA, tB).U
            DU = K.closed_dec_hull(U)
            V = separate(K, DU, tB).V
        except TPSError as exc:
            raise InvalidInput(f"step {j}: {exc}") from exc
        IV = K.closed_inc_hull(V)
        if DU & IV:
            raise InternalError(f"step {j}: D(U) meets I(V)")
        steps.append(TraceStep(tA, tB, U, V))
        if j + 1 < len(exh):
            nxt = exh.pieces[j + 1]
            tA = nxt.dec_hull(exh.embed(j, DU)) | A[j + 1]
            tB = nxt.inc_hull(exh.embed(j, IV)) | B[j + 1]
    return SeparationTrace(exh, tuple(steps))


def limit_open_check(exh: Exhaustion, U_per_piece) -> bool:
    """Is the horizon union of a nested family open in the k_omega sense?

    Each member must be open in its piece, and the trace of the union on
    every piece must be open there.
    """
    U = _masks(exh, U_per_piece)
    for j in range(len(exh) - 1):
        if exh.embed(j, U[j]) & ~U[j + 1]:
            raise InvalidInput(f"family is not nested at step {j}")
    last = len(exh) - 1
    for s, K in enumerate(exh.pieces):
        if not K.topology.is_open(U[s]):
            return False
        if not K.topology.is_open(exh.trace_on(s, U[last], last)):
            return False
    return True


def stream_extend(exh: Exhaustion, f_on_K1: MonotoneFn, D_per_piece, I_per_piece,
                  *, all_steps: bool = False):
    """Extend ``f`` from ``K_1`` through every piece, pinning D to 0 and I to 1.

    Each step applies the pinned extension on ``K_{j+1}`` to the image of
    ``K_j``.  Returns the function on the last piece, or every intermediate
    function when ``all_steps`` is set.
    """
    D, I = _masks(exh, D_per_piece), _masks(exh, I_per_piece)
    _coherent(exh, D, "D")
    _coherent(exh, I, "I")
    K1 = exh.pieces[0]
    try:
        check_pair(K1, D[0], I[0])
        f = extend_with_pinning(K1, K1.full, f_on_K1, D[0], I[0])
    except TPSError as exc:
        raise InvalidInput(f"step 0: {exc}") from exc
    fs = [f]
    for j in range(len(exh) - 1):
        nxt = exh.pieces[j + 1]
        incl = exh.inclusions[j]
        lifted = MonotoneFn([incl[p] for p in f.points], f.values)
        try:
            f = extend_with_pinning(nxt, None, lifted, D[j + 1], I[j + 1])
        except TPSError as exc:
            raise InvalidInput(f"step {j + 1}: {exc}") from exc
        fs.append(f)
    # continuity on every piece of the final function, read back through the maps
    for s, K in enumerate(exh.pieces):
        restricted = _restrict_through(exh, fs[-1], s)
        if not (is_continuous(K, restricted) and is_isotone(K, restricted)):
            raise InternalError(f"extension is not continuous isotone on piece {s}")
        vals = aligned(K, restricted)
        if any(vals[i] != 0 for i in bits(D[s])) or any(vals[i] != 1 for i in bits(I[s])):
            raise InternalError(f"pins broken on piece {s}")
    return fs if all_steps else fs[-1]


def _restrict_through(exh: Exhaustion, F: MonotoneFn, s: int) -> MonotoneFn:
    """Read a function on the last piece back onto piece ``s``."""
    names = {p: p for p in exh.pieces[s].points}
    for j in range(s, len(exh) - 1):
        names = {p: exh.inclusions[j][q] for p, q in names.items()}
    return MonotoneFn(exh.pieces[s].points, [F[names[p]] for p in exh.pieces[s].points])
