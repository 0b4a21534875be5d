"""JSON file formats: spaces, functions, certificates, exhaustions.

Space file::

    {"points": ["a", "b"],
     "opens": [[], ["a"], ["a", "b"]],      # or "basis": [...] to generate
     "order": [["a", "b"]]}                 # generator edges, read a <= b

Function file: ``{"a": [0, 1], "b": [1, 2]}`` (numerator, denominator in
lowest terms).
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from pathlib import Path

from .errors import InvalidSpace, ParseError
from .exhaustion import Exhaustion
from .functions import MonotoneFn
from .preorder import PreorderedSpace, make_preorder
from .topology import FiniteTopology, make_topology


def _string_list(value, what):
    if not isinstance(value, list) or not all(isinstance(p, str) for p in value):
        raise ParseError(f"{what} must be a list of strings")
    return value


def parse_space(obj) -> PreorderedSpace:
    if not isinstance(obj, dict):
        raise ParseError("space file must hold a JSON object")
    if "points" not in obj:
        raise ParseError("space file needs 'points'")
    points = _string_list(obj["points"], "points")
    if not points:
        raise InvalidSpace("a space needs at least one point")
    if ("opens" in obj) == ("basis" in obj):
        raise ParseError("space file needs exactly one of 'opens' or 'basis'")
    key = "opens" if "opens" in obj else "basis"
    family = obj[key]
    if not isinstance(family, list):
        raise ParseError(f"'{key}' must be a list of lists")
    family = [_string_list(s, f"members of '{key}'") for s in family]
    edges = obj.get("order", [])
    if not isinstance(edges, list) or not all(
            isinstance(e, list) and len(e) == 2 and all(isinstance(p, str) for p in e)
            for e in edges):
        raise ParseError("'order' must be a list of [x, y] pairs")
    if key == "basis":
        T = make_topology(points, family)
    else:
        probe = FiniteTopology(points, [], check=False)
        T = FiniteTopology(points, {probe.mask(s) for s in family})
    return PreorderedSpace(T, make_preorder(T.points, edges))


def space_to_json(ps: PreorderedSpace) -> dict:
    """Explicit opens and every non-reflexive related pair, deterministic."""
    T = ps.topology
    return {
        "points": [str(p) for p in ps.points],
        "opens": [[str(p) for p in T.sorted_ids(o)] for o in T.open_list()],
        "order": [[str(ps.points[x]), str(ps.points[y])] for x, y in ps.order.pairs()],
    }


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc


def load_space(path) -> PreorderedSpace:
    return parse_space(read_json(path))


def function_to_json(f: MonotoneFn) -> dict:
    return {str(p): [v.numerator, v.denominator] for p, v in zip(f.points, f.values)}


def parse_function(obj) -> MonotoneFn:
    if not isinstance(obj, dict):
        raise ParseError("function file must hold a JSON object")
    points, values = [], []
    for p, v in obj.items():
        if (not isinstance(v, list) or len(v) != 2
                or not all(isinstance(k, int) for k in v) or v[1] == 0):
            raise ParseError(f"value of {p!r} must be [numerator, denominator]")
        points.append(p)
        values.append(Fraction(v[0], v[1]))
    return MonotoneFn(points, values)


def certificate_to_json(fs) -> list[dict]:
    return [function_to_json(f) for f in fs]


def parse_certificate(obj) -> list[MonotoneFn]:
    if not isinstance(obj, list):
        raise ParseError("certificate must be a JSON array")
    return [parse_function(o) for o in obj]


def dump(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def load_exhaustion(directory) -> Exhaustion:
    """Read ``piece_001.json``, ``piece_002.json``, ... and an optional
    ``inclusions.json`` (array of id-to-id objects, one per step)."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ParseError(f"{directory}: not a directory")
    names = sorted(n for n in os.listdir(directory)
                   if n.startswith("piece_") and n.endswith(".json"))
    if not names:
        raise ParseError(f"{directory}: no piece_*.json files")
    pieces = [load_space(directory / n) for n in names]
    incl_path = directory / "inclusions.json"
    inclusions = ()
    if incl_path.exists():
        raw = read_json(incl_path)
        if not isinstance(raw, list) or not all(isinstance(m, dict) for m in raw):
            raise ParseError("inclusions.json must be an array of objects")
        inclusions = tuple(raw)
    return Exhaustion(tuple(pieces), inclusions)


def save_exhaustion(exh: Exhaustion, directory) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for j, K in enumerate(exh.pieces, start=1):
        dump(space_to_json(K), directory / f"piece_{j:03d}.json")
    dump([dict(m) for m in exh.inclusions], directory / "inclusions.json")
