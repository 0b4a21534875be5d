"""``tps`` command line.

Every command re-checks the postconditions of what it emits before exiting
0.  Exit codes: 0 ok, 1 not found, 2 parse error, 3 invalid space or input,
4 not separable / not applicable, 5 extension condition violated, 6 internal
verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io
from .errors import (ConditionViolated, InternalError, InvalidInput, NotApplicable,
                     NotFound, ParseError, TPSError)
from .exhaustion import Exhaustion, limit_open_check, stream_separate, validate_exhaustion
from .functions import aligned, is_continuous, is_isotone, is_utility, level_mask
from .preorder import classify
from .quotient import check_quotient_closed, check_remark_equivalences, order_reflected, quotient_space
from .search import FLAG_NAMES, find_exhaustive, find_random
from .separation import (check_pair, extend_isotone, extend_with_pinning,
                         perfectly_separate, separate, urysohn)
from .topology import bits
from .utility import REPRESENT, utility_representation, verify_representation

EXHAUSTIVE_MAX = 6
RANDOM_MAX = 8


def _subset(ps, text: str | None) -> int:
    if not text:
        return 0
    names = [p.strip() for p in text.split(",") if p.strip()]
    unknown = [p for p in names if p not in ps.points]
    if unknown:
        raise InvalidInput(f"unknown points {unknown}")
    return ps.mask(names)


def _emit(obj, out: str | None) -> None:
    text = io.dump(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _verify(ok: bool, what: str) -> None:
    if not ok:
        raise InternalError(f"verification failed: {what}")


def _json_arg(text: str):
    """Inline JSON, or the path of a JSON file."""
    path = Path(text)
    if path.exists():
        return io.read_json(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not a file or JSON value: {text!r}") from exc


# -- commands -----------------------------------------------------------------------

def cmd_check(args) -> int:
    ps = io.load_space(args.space)
    cls = classify(ps)
    if args.format == "json":
        _emit({"flags": cls.as_dict(), "witnesses": cls.witnesses}, None)
    else:
        for name in cls.FLAGS:
            value = getattr(cls, name)
            line = f"{name}: {str(value).lower()}"
            if not value:
                line += f"  witness: {json.dumps(cls.witnesses[name])}"
            print(line)
    return 0


def cmd_separate(args) -> int:
    ps = io.load_space(args.space)
    A, B = _subset(ps, args.A), _subset(ps, args.B)
    check_pair(ps, A, B)
    sep = separate(ps, A, B)
    _verify(sep.is_valid(ps, A, B), "separator")
    _emit(sep.as_ids(ps), args.out)
    _note("separator verified: U open decreasing, V open increasing, disjoint")
    return 0


def _check_function(ps, F) -> None:
    _verify(is_continuous(ps, F), "continuity")
    _verify(is_isotone(ps, F), "isotonicity")


def cmd_urysohn(args) -> int:
    ps = io.load_space(args.space)
    A, B = _subset(ps, args.A), _subset(ps, args.B)
    F = urysohn(ps, A, B)
    vals = aligned(ps, F)
    _check_function(ps, F)
    _verify(all(vals[i] == 0 for i in bits(A)) and all(vals[i] == 1 for i in bits(B)),
            "pins")
    _emit(io.function_to_json(F), args.out)
    _note("urysohn function verified: continuous, isotone, 0 on A, 1 on B")
    return 0


def cmd_extend(args) -> int:
    ps = io.load_space(args.space)
    f = io.parse_function(io.read_json(args.f))
    unknown = [p for p in f.points if p not in ps.points]
    if unknown:
        raise InvalidInput(f"function mentions unknown points {unknown}")
    S = _subset(ps, args.S) if args.S is not None else ps.mask(f.points)
    if args.A is not None or args.B is not None:
        A, B = _subset(ps, args.A), _subset(ps, args.B)
        F = extend_with_pinning(ps, S, f, A, B)
        vals = aligned(ps, F)
        _verify(all(vals[i] == 0 for i in bits(A)) and all(vals[i] == 1 for i in bits(B)),
                "pins")
    else:
        F = extend_isotone(ps, S, f)
    _check_function(ps, F)
    _verify(all(F[p] == f[p] for p in f.points), "restriction to S")
    _emit(io.function_to_json(F), args.out)
    _note("extension verified: continuous, isotone, agrees with f")
    return 0


def cmd_perfect(args) -> int:
    ps = io.load_space(args.space)
    A, B = _subset(ps, args.A), _subset(ps, args.B)
    F = perfectly_separate(ps, A, B)
    vals = aligned(ps, F)
    _check_function(ps, F)
    _verify(level_mask(vals, lambda v: v == 0) == A, "zero set is A")
    _verify(level_mask(vals, lambda v: v == 1) == B, "one set is B")
    _emit(io.function_to_json(F), args.out)
    _note("exact separation verified: f^-1(0) = A, f^-1(1) = B")
    return 0


def cmd_utilities(args) -> int:
    ps = io.load_space(args.space)
    try:
        fs = utility_representation(ps)
    except NotApplicable:
        _note("flags: " + json.dumps(ps.flags.as_dict()))
        raise
    _verify(verify_representation(ps, fs, REPRESENT), "representation")
    _verify(all(is_continuous(ps, f) and is_utility(ps, f) for f in fs), "utilities")
    _emit(io.certificate_to_json(fs), args.out)
    _note(f"representation verified: {len(fs)} continuous utilities")
    return 0


def cmd_quotient(args) -> int:
    ps = io.load_space(args.space)
    pres = quotient_space(ps)
    _verify(order_reflected(ps, pres), "order reflected by the projection")
    remark = check_remark_equivalences(ps)
    _verify(remark.all_hold, "flags agree on the quotient")
    doc = io.space_to_json(pres.quotient_space)
    doc["projection"] = {str(p): c for p, c in sorted(pres.projection.items(), key=str)}
    _emit(doc, args.out)
    report = {
        "semiclosed agrees": remark.semiclosed_agrees,
        "regular agrees": remark.regular_agrees,
        "normal agrees": remark.normal_agrees,
        "monotone sets correspond": remark.monotone_sets_correspond,
    }
    if ps.flags.closed:
        rep = check_quotient_closed(ps)
        _verify(rep.closed_ordered, "quotient of a closed space is closed ordered")
        report["quotient closed ordered"] = True
    for key, value in report.items():
        _note(f"{key}: {str(value).lower()}")
    return 0


def _per_piece(exh: Exhaustion, text: str | None):
    if text is None:
        return [0] * len(exh)
    raw = _json_arg(text)
    if not isinstance(raw, list) or not all(isinstance(s, list) for s in raw):
        raise ParseError("per-piece subsets must be a JSON array of arrays")
    if len(raw) < len(exh):
        raise InvalidInput(f"need {len(exh)} subsets, got {len(raw)}")
    out = []
    for K, names in zip(exh.pieces, raw):
        unknown = [p for p in names if p not in K.points]
        if unknown:
            raise InvalidInput(f"unknown points {unknown}")
        out.append(K.mask(names))
    return out


def cmd_stream(args) -> int:
    exh = io.load_exhaustion(args.exhaustion)
    if args.steps is not None:
        if args.steps < 1:
            raise InvalidInput("--steps must be positive")
        exh = Exhaustion(exh.pieces[:args.steps], exh.inclusions[:args.steps - 1])
    report = validate_exhaustion(exh)
    if not report.valid:
        raise InvalidInput(f"invalid exhaustion at step {report.step}: {report.reason}")
    A, B = _per_piece(exh, args.A_per_piece), _per_piece(exh, args.B_per_piece)
    trace = stream_separate(exh, A, B)
    bad = trace.violations()
    _verify(not bad, "; ".join(bad))
    _verify(limit_open_check(exh, [s.U for s in trace.steps]), "union of U is open")
    _verify(limit_open_check(exh, [s.V for s in trace.steps]), "union of V is open")
    _emit(trace.to_json(), args.out)
    _note(f"trace verified: {len(trace.steps)} steps, invariants hold, limits open")
    return 0


def _flags(values) -> list[str]:
    out = []
    for v in values or ():
        out.extend(x.strip() for x in v.split(",") if x.strip())
    for name in out:
        if name not in FLAG_NAMES:
            raise InvalidInput(f"unknown flag {name!r}; choose from {', '.join(FLAG_NAMES)}")
    return out


def cmd_find(args) -> int:
    require, forbid = _flags(args.require), _flags(args.forbid)
    randomized = args.seed is not None or args.n > EXHAUSTIVE_MAX
    if args.n < 1:
        raise InvalidInput("n must be positive")
    if randomized and args.n > RANDOM_MAX:
        raise InvalidInput(f"random search supports n <= {RANDOM_MAX}")
    try:
        if randomized:
            ps = find_random(args.n, require, forbid, seed=args.seed or 0)
        else:
            ps = find_exhaustive(args.n, require, forbid)
    except NotFound:
        print("NOT_FOUND")
        return NotFound.exit_code
    cls = classify(ps)
    _verify(all(getattr(cls, r) for r in require) and not any(getattr(cls, f) for f in forbid),
            "found space has the requested flags")
    _emit(io.space_to_json(ps), args.out)
    return 0


def dot_text(ps) -> str:
    """Hasse edges of the order solid; covers among minimal neighbourhoods dashed."""
    T, up = ps.topology, ps.order.up
    name = [json.dumps(str(p)) for p in ps.points]
    lines = ["digraph space {"]
    for x in range(ps.n):
        lines.append(f"  {name[x]};")
    down = ps.order.down
    reps = [x for x in range(ps.n) if not any(up[x] & down[x] >> z & 1 for z in range(x))]
    for r in reps:
        for y in bits(up[r] & down[r] & ~(1 << r)):
            lines.append(f"  {name[r]} -> {name[y]} [dir=none];")
    for x in reps:
        for y in reps:
            if x == y or not up[x] >> y & 1:
                continue
            # cover: nothing strictly between the two classes
            if not any(z not in (x, y) and up[x] >> z & 1 and up[z] >> y & 1
                       for z in reps):
                lines.append(f"  {name[x]} -> {name[y]};")
    nb = [T.nbhd(i) for i in range(ps.n)]
    for x in range(ps.n):
        for y in range(ps.n):
            if x == y or nb[x] & ~nb[y]:
                continue
            if nb[x] == nb[y]:
                if x < y:
                    lines.append(f"  {name[x]} -> {name[y]} [style=dashed, dir=none];")
                continue
            if any(nb[x] & ~nb[z] == 0 and nb[z] & ~nb[y] == 0
                   and nb[z] not in (nb[x], nb[y]) for z in range(ps.n)):
                continue
            lines.append(f"  {name[x]} -> {name[y]} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_dot(args) -> int:
    ps = io.load_space(args.space)
    text = dot_text(ps)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="classify a space along the separation hierarchy")
    p.add_argument("space")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json")
    fmt.add_argument("--text", dest="format", action="store_const", const="text")
    p.set_defaults(func=cmd_check, format="text")

    for name, func, helptext in (
            ("separate", cmd_separate, "open monotone separator of A and B"),
            ("urysohn", cmd_urysohn, "continuous isotone f with f=0 on A, f=1 on B"),
            ("perfect", cmd_perfect, "continuous isotone f with f^-1(0)=A, f^-1(1)=B")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("space")
        p.add_argument("--A", default="", help="closed decreasing set, comma-separated ids")
        p.add_argument("--B", default="", help="closed increasing set, comma-separated ids")
        p.add_argument("--out")
        p.set_defaults(func=func)

    p = sub.add_parser("extend", help="extend a continuous isotone function from S")
    p.add_argument("space")
    p.add_argument("--f", required=True, help="function file on S")
    p.add_argument("--S", help="domain of f (defaults to the points of the function file)")
    p.add_argument("--A", help="points pinned to 0")
    p.add_argument("--B", help="points pinned to 1")
    p.add_argument("--out")
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("utilities", help="represent the preorder by continuous utilities")
    p.add_argument("space")
    p.add_argument("--out")
    p.set_defaults(func=cmd_utilities)

    p = sub.add_parser("quotient", help="indifference quotient with projection")
    p.add_argument("space")
    p.add_argument("--out")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("stream", help="streaming separation over an exhaustion directory")
    p.add_argument("exhaustion")
    p.add_argument("--A-per-piece", dest="A_per_piece",
                   help="JSON array (or file) with one closed decreasing set per piece")
    p.add_argument("--B-per-piece", dest="B_per_piece",
                   help="JSON array (or file) with one closed increasing set per piece")
    p.add_argument("--steps", type=int, help="only use the first J pieces")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stream)

    p = sub.add_parser("find", help="search for a space with given flags")
    p.add_argument("n", type=int)
    p.add_argument("--require", action="append", help="comma-separated flags")
    p.add_argument("--forbid", action="append", help="comma-separated flags")
    p.add_argument("--seed", type=int, help="seeded random search instead of exhaustive")
    p.add_argument("--out")
    p.set_defaults(func=cmd_find)

    p = sub.add_parser("dot", help="Graphviz rendering of order and neighbourhoods")
    p.add_argument("space")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConditionViolated as exc:
        _note(f"error: {exc}")
        _note(f"witness: xi={exc.xi} xi'={exc.xi_prime} point={exc.point}")
        return exc.exit_code
    except TPSError as exc:
        _note(f"error: {exc}")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
