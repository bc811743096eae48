"""TFAN documents: JSON with integers written as decimal strings.

Canonical key order: format, version, ambient_rank, rays, cones, weights,
pl_functions, metadata. ``cones`` lists the maximal cones and ``weights`` is
aligned with it. Readers also accept plain JSON integers.
"""

from __future__ import annotations

import json
from typing import Any, Optional

from . import matroid as mt
from . import plfun as pl
from . import polyfan as pf
from . import tropcycle as tc
from .tropcycle import WeightedFan

FORMAT = "tfan"
VERSION = "1"


class TfanError(ValueError):
    pass


class TfanParseError(TfanError):
    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {msg}")
        self.line = line
        self.column = column


def _int(x: Any, where: str) -> int:
    if isinstance(x, bool):
        raise TfanError(f"{where}: expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise TfanError(f"{where}: expected an integer, got {x!r}")


def _ints(xs: Any, where: str) -> list[int]:
    if not isinstance(xs, list):
        raise TfanError(f"{where}: expected a list")
    return [_int(x, f"{where}[{i}]") for i, x in enumerate(xs)]


def _s(x: int) -> str:
    return str(int(x))


def loads_json(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TfanParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise TfanParseError("top level must be an object", 1, 1)
    return doc


def fan_to_doc(wf: WeightedFan, pl_functions: Optional[dict] = None,
               metadata: Optional[dict] = None) -> dict:
    fan = wf.fan
    maxc = fan.cones_of_dim(fan.dim)
    doc: dict = {
        "format": FORMAT,
        "version": VERSION,
        "ambient_rank": _s(fan.ambient_rank),
        "rays": [[_s(x) for x in r] for r in fan.rays],
        "cones": [[_s(i) for i in sorted(c)] for c in maxc],
        "weights": [_s(wf.weights[c]) for c in maxc],
    }
    if pl_functions:
        doc["pl_functions"] = {name: pl_to_doc(phi) for name, phi in sorted(pl_functions.items())}
    if metadata:
        doc["metadata"] = metadata
    return doc


def pl_to_doc(phi: pl.PLFunction) -> dict:
    fan = phi.fan
    if fan.simplicial:
        return {"ray_values": [_s(v) for v in phi.ray_values()]}
    maxc = fan.cones_of_dim(fan.dim)
    return {"local_covectors": [[_s(v) for v in phi.charts[c]] for c in maxc]}


def doc_to_fan(doc: dict, check: bool = True) -> tuple[WeightedFan, dict, dict]:
    """Parse a TFAN object into ``(weighted fan, pl functions, metadata)``."""
    if doc.get("format", FORMAT) != FORMAT:
        raise TfanError(f"unknown format {doc.get('format')!r}")
    for key in ("ambient_rank", "rays", "cones", "weights"):
        if key not in doc:
            raise TfanError(f"missing key {key!r}")
    n = _int(doc["ambient_rank"], "ambient_rank")
    rays = [_ints(r, f"rays[{i}]") for i, r in enumerate(doc["rays"])]
    cones = [_ints(c, f"cones[{i}]") for i, c in enumerate(doc["cones"])]
    weights = _ints(doc["weights"], "weights")
    if len(weights) != len(cones):
        raise TfanError("weights must align with cones")
    fan = pf.build_fan(rays, cones, n, check=check)
    wmap = {}
    for c, w in zip(cones, weights):
        key = frozenset(c)
        if fan.cone_dim(key) != fan.dim:
            raise TfanError(f"cone {c} is not of top dimension")
        wmap[key] = w
    signed = bool(doc.get("metadata", {}).get("signed", False)) if isinstance(doc.get("metadata"), dict) else False
    wf = WeightedFan(fan, wmap, signed=signed)
    pls = {}
    for name, entry in (doc.get("pl_functions") or {}).items():
        pls[name] = doc_to_pl(fan, entry, f"pl_functions.{name}")
    return wf, pls, doc.get("metadata") or {}


def doc_to_pl(fan: pf.Fan, entry: dict, where: str = "pl") -> pl.PLFunction:
    if not isinstance(entry, dict) or len(entry) != 1:
        raise TfanError(f"{where}: expected one of ray_values, covectors, local_covectors")
    (kind, data), = entry.items()
    maxc = fan.cones_of_dim(fan.dim)
    if kind == "ray_values":
        return pl.make_pl(fan, ray_values=_ints(data, where))
    if kind in ("covectors", "local_covectors"):
        rows = [_ints(r, f"{where}[{i}]") for i, r in enumerate(data)]
        if len(rows) != len(maxc):
            raise TfanError(f"{where}: need one covector per maximal cone")
        table = dict(zip(maxc, rows))
        if kind == "covectors":
            return pl.make_pl(fan, covectors=table)
        return pl.make_pl(fan, local_covectors=table)
    raise TfanError(f"{where}: unknown function kind {kind!r}")


def dumps(doc: dict) -> str:
    """Canonical text: two-space indent, lists of scalars on one line."""
    return _fmt(doc, 0) + "\n"


def _fmt(x: Any, level: int) -> str:
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_fmt(v, level + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list):
        if all(not isinstance(v, (dict, list)) for v in x):
            return json.dumps(x)
        return "[\n" + ",\n".join(inner + _fmt(v, level + 1) for v in x) + "\n" + pad + "]"
    return json.dumps(x)


def write_fan(wf: WeightedFan, pl_functions: Optional[dict] = None,
              metadata: Optional[dict] = None) -> str:
    return dumps(fan_to_doc(wf, pl_functions, metadata))


def read_fan(text: str, check: bool = True) -> tuple[WeightedFan, dict, dict]:
    return doc_to_fan(loads_json(text), check=check)


# ---------------------------------------------------------------------------
# matroids: {"format": "matroid", "version", "ground_size", "bases"}


def matroid_to_doc(m: mt.Matroid) -> dict:
    bases = sorted(sorted(b) for b in m.bases)
    return {"format": "matroid", "version": VERSION, "ground_size": _s(m.ground_size),
            "bases": [[_s(e) for e in b] for b in bases]}


def doc_to_matroid(doc: dict) -> mt.Matroid:
    if doc.get("format", "matroid") != "matroid":
        raise TfanError(f"unknown format {doc.get('format')!r}")
    for key in ("ground_size", "bases"):
        if key not in doc:
            raise TfanError(f"missing key {key!r}")
    if not isinstance(doc["bases"], list):
        raise TfanError("bases: expected a list")
    n = _int(doc["ground_size"], "ground_size")
    return mt.matroid_from_bases(n, [_ints(b, f"bases[{i}]") for i, b in enumerate(doc["bases"])])


def read_matroid(text: str) -> mt.Matroid:
    return doc_to_matroid(loads_json(text))
