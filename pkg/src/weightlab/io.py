"""Model files and reports (JSON, schema 1).

NCD files::

    {"schema": 1, "kind": "ncd", "n": 1,
     "vertices": [0, 1, ...],
     "X": [[0, 1, 3], ...]            # top simplices, or null (divisor only)
     "components": [{"name": "P", "simplices": [[0]]}, ...],
     "orientation_seeds": [{"stratum": [], "simplices": [[0, 1, 3]]}],
     "flags": {"isolated_singularity": false, "self_intersections": [...]}}

Vertex labels are integers, strings or lists (read as tuples).  Plumbing
files::

    {"schema": 1, "kind": "plumbing",
     "vertices": [{"genus": 1, "self_int": 0}], "edges": [[0, 1], ...]}

Reports are written with sorted keys and exact numbers as strings, so
identical inputs give byte-identical output.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import InputError, WeightlabError
from .ncd import NCDModel
from .plumbing import PlumbingGraph
from .simplicial import SimplicialComplex

__all__ = [
    "SCHEMA",
    "load_model",
    "parse_model",
    "model_to_dict",
    "dumps",
    "exact",
    "bundled_models",
    "bundled_path",
]

SCHEMA = 1


def _label(v):
    if isinstance(v, list):
        return tuple(_label(x) for x in v)
    if isinstance(v, (int, str)) and not isinstance(v, bool):
        return v
    raise InputError(f"invalid vertex label {v!r}")


def _unlabel(v):
    if isinstance(v, tuple):
        return [_unlabel(x) for x in v]
    return v


def _simplices(raw, what: str) -> list[tuple]:
    if not isinstance(raw, list):
        raise InputError(f"{what} must be a list of simplices")
    out = []
    for s in raw:
        if not isinstance(s, list) or not s:
            raise InputError(f"{what}: simplex {s!r} must be a nonempty list of vertices")
        out.append(tuple(_label(v) for v in s))
    return out


def _complex(raw, what: str) -> SimplicialComplex:
    try:
        return SimplicialComplex(_simplices(raw, what))
    except TypeError as exc:
        raise InputError(f"{what}: vertex labels are not mutually comparable ({exc})") from None


def parse_model(data: dict) -> NCDModel | PlumbingGraph:
    """Build a model from a parsed JSON document."""
    if not isinstance(data, dict):
        raise InputError("model file must contain a JSON object")
    if data.get("schema") != SCHEMA:
        raise InputError(f"unsupported schema {data.get('schema')!r}; expected {SCHEMA}")
    kind = data.get("kind")
    if kind == "plumbing":
        try:
            verts = data["vertices"]
            genera = [int(v["genus"]) for v in verts]
            selfs = [int(v["self_int"]) for v in verts]
            edges = [tuple(e) for e in data.get("edges", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed plumbing file: {exc}") from None
        if any(len(e) != 2 for e in edges):
            raise InputError("edges must be pairs of vertex indices")
        G = PlumbingGraph(genera, selfs, edges)
        G.flags = dict(data.get("flags", {}))
        return G
    if kind != "ncd":
        raise InputError(f"unknown model kind {kind!r}; expected 'ncd' or 'plumbing'")
    try:
        n = int(data["n"])
        comps_raw = data["components"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed ncd file: missing or invalid {exc}") from None
    X = None if data.get("X") is None else _complex(data["X"], "X")
    names, comps = [], []
    for i, c in enumerate(comps_raw):
        if not isinstance(c, dict) or "simplices" not in c:
            raise InputError(f"component {i} must be an object with 'simplices'")
        names.append(str(c.get("name", f"Y{i}")))
        comps.append(_complex(c["simplices"], f"component {i}"))
    if "vertices" in data:
        declared = {_label(v) for v in data["vertices"]}
        used = set((X.vertices if X is not None else []))
        for Y in comps:
            used |= set(Y.vertices)
        missing = used - declared
        if missing:
            raise InputError(f"undeclared vertices: {sorted(map(repr, missing))[:5]}")
    seeds = {}
    for entry in data.get("orientation_seeds", []):
        sid = tuple(int(a) for a in entry.get("stratum", []))
        seeds[sid] = _simplices(entry.get("simplices", []), f"orientation seeds of {sid}")
    flags = dict(data.get("flags", {}))
    return NCDModel(X, comps, n, names=names, orientation_seeds=seeds, flags=flags)


def load_model(path: str | Path) -> NCDModel | PlumbingGraph:
    """Read a model file; every failure is an InputError."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    try:
        return parse_model(data)
    except WeightlabError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InputError(f"{path}: malformed model ({exc})") from None


def model_to_dict(M: NCDModel | PlumbingGraph) -> dict:
    if isinstance(M, PlumbingGraph):
        d = M.to_dict()
        flags = getattr(M, "flags", None)
        if flags:
            d["flags"] = dict(flags)
        return d
    verts = set()
    if M.X is not None:
        verts |= set(M.X.vertices)
    for Y in M.components:
        verts |= set(Y.vertices)
    out = {
        "schema": SCHEMA,
        "kind": "ncd",
        "n": M.n,
        "vertices": [_unlabel(v) for v in sorted(verts)],
        "X": None if M.X is None else [[_unlabel(v) for v in s] for s in M.X.facets()],
        "components": [{"name": nm, "simplices": [[_unlabel(v) for v in s] for s in Y.facets()]}
                       for nm, Y in zip(M.names, M.components)],
    }
    if M.seeds:
        out["orientation_seeds"] = [{"stratum": list(k), "simplices": [[_unlabel(v) for v in s] for s in v]}
                                    for k, v in sorted(M.seeds.items())]
    if M.flags:
        out["flags"] = dict(M.flags)
    return out


def exact(x):
    """Recursively turn numbers into strings (ints and Fractions exactly)."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, Fraction)):
        return str(x)
    if hasattr(x, "item") and not isinstance(x, (list, tuple, dict)):
        return exact(x.item())
    if isinstance(x, dict):
        return {str(k): exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [exact(v) for v in x]
    if isinstance(x, float):
        return "inf" if x == float("inf") else repr(x)
    return str(x)


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("weightlab") / "data" / f"{name}.json"))


def bundled_models() -> list[str]:
    folder = Path(str(resources.files("weightlab") / "data"))
    return sorted(p.stem for p in folder.glob("*.json"))
