"""JSON serialization and problem-file parsing.

Rationals are written as ``[numerator, denominator]`` and never as floats.
``emit_*`` functions produce canonical text (sorted keys, compact
separators), so equal objects give byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import jsonschema

from .errors import DomainError, MukaiError, ParseError
from .lattice import Isometry, MukaiVector, NSLattice
from .reduction import ReductionStep, ReductionTrace
from .stability import StabParam
from .wallcross import WallKind
from .walls import Contradiction, NoWallCertificate, Wall

__all__ = [
    "ProblemFile",
    "PROBLEM_SCHEMA",
    "dumps",
    "parse_problem",
    "emit_trace_json",
    "parse_trace_json",
    "fraction_to_json",
    "fraction_from_json",
    "lattice_to_json",
    "lattice_from_json",
    "vector_to_json",
    "vector_from_json",
    "stab_to_json",
    "stab_from_json",
    "wall_to_json",
    "wall_from_json",
    "certificate_to_json",
    "certificate_from_json",
    "wall_kind_to_json",
    "wall_kind_from_json",
    "trace_to_json",
    "trace_from_json",
]


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# -- scalars -----------------------------------------------------------------

def fraction_to_json(q: Fraction | int) -> list[int]:
    q = Fraction(q)
    return [q.numerator, q.denominator]


def fraction_from_json(obj: Any, pointer: str = "") -> Fraction:
    if isinstance(obj, bool):
        raise ParseError("rational expected, got a boolean", pointer)
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, list) and len(obj) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in obj):
        if obj[1] <= 0:
            raise ParseError("rational denominator must be positive", f"{pointer}/1")
        return Fraction(obj[0], obj[1])
    raise ParseError("rational must be an integer or [numerator, denominator]", pointer)


def _pairs_to_json(checks) -> list[dict]:
    return [{"name": name, "ok": bool(ok)} for name, ok in checks]


def _pairs_from_json(obj) -> list[tuple[str, bool]]:
    return [(c["name"], c["ok"]) for c in obj]


# -- lattice objects ---------------------------------------------------------

def lattice_to_json(lat: NSLattice) -> dict:
    return {"gram": [list(row) for row in lat.gram], "labels": list(lat.labels)}


def lattice_from_json(obj: dict, pointer: str = "") -> NSLattice:
    try:
        return NSLattice(tuple(tuple(row) for row in obj["gram"]), tuple(obj.get("labels", ())))
    except MukaiError as exc:
        raise ParseError(str(exc), f"{pointer}/gram") from exc


def vector_to_json(v: MukaiVector) -> dict:
    return {"r": v.r, "delta": list(v.delta), "s": v.s}


def vector_from_json(obj: dict, lat: NSLattice, pointer: str = "") -> MukaiVector:
    if len(obj["delta"]) != lat.rank:
        raise ParseError(f"delta has {len(obj['delta'])} entries, lattice rank is {lat.rank}", f"{pointer}/delta")
    return MukaiVector(obj["r"], tuple(obj["delta"]), obj["s"], lat)


def _placed_to_json(v: MukaiVector) -> dict:
    return {"lattice": lattice_to_json(v.lattice), "vector": vector_to_json(v)}


def _placed_from_json(obj: dict) -> MukaiVector:
    return vector_from_json(obj["vector"], lattice_from_json(obj["lattice"]))


def stab_to_json(p: StabParam) -> dict:
    return {"d": p.d, "alpha": fraction_to_json(p.alpha), "beta": fraction_to_json(p.beta)}


def stab_from_json(obj: dict, pointer: str = "") -> StabParam:
    alpha = fraction_from_json(obj["alpha"], f"{pointer}/alpha")
    beta = fraction_from_json(obj["beta"], f"{pointer}/beta")
    try:
        return StabParam(obj["d"], alpha, beta)
    except DomainError as exc:
        raise ParseError(str(exc), pointer) from exc


# -- walls -------------------------------------------------------------------

def wall_to_json(w: Wall) -> dict:
    out = {
        "shape": w.shape,
        "destabilizer": vector_to_json(w.destabilizer),
        "for_vector": vector_to_json(w.for_vector),
        "lattice": lattice_to_json(w.for_vector.lattice),
        "classes": [vector_to_json(u) for u in w.classes],
    }
    if w.shape == "semicircle":
        out["center"] = fraction_to_json(w.center)
        out["radius_sq"] = fraction_to_json(w.radius_sq)
    else:
        out["beta"] = fraction_to_json(w.beta)
    return out


def wall_from_json(obj: dict) -> Wall:
    lat = lattice_from_json(obj["lattice"])
    u = vector_from_json(obj["destabilizer"], lat)
    v = vector_from_json(obj["for_vector"], lat)
    classes = tuple(vector_from_json(c, lat) for c in obj.get("classes", ()))
    if obj["shape"] == "semicircle":
        return Wall("semicircle", u, v, fraction_from_json(obj["center"]),
                    fraction_from_json(obj["radius_sq"]), classes=classes)
    return Wall(obj["shape"], u, v, beta=fraction_from_json(obj["beta"]), classes=classes)


def certificate_to_json(cert: NoWallCertificate) -> dict:
    return {
        "n": cert.n,
        "k": cert.k,
        "d": cert.d,
        "bounds": list(cert.bounds),
        "candidates_checked": cert.candidates_checked,
        "contradictions": [
            {"c": x.c, "s_min": x.s_min, "s_max": x.s_max, "reason": x.reason}
            for x in cert.contradictions
        ],
        "surviving": [wall_to_json(w) for w in cert.surviving],
        "checks": _pairs_to_json(cert.checks),
        "status": "Valid" if cert.valid else "Invalid",
    }


def certificate_from_json(obj: dict) -> NoWallCertificate:
    return NoWallCertificate(
        obj["n"],
        obj["k"],
        obj["d"],
        tuple(obj["bounds"]),
        obj["candidates_checked"],
        tuple(Contradiction(x["c"], x["s_min"], x["s_max"], x["reason"]) for x in obj["contradictions"]),
        tuple(wall_from_json(w) for w in obj["surviving"]),
        tuple(_pairs_from_json(obj["checks"])),
    )


def wall_kind_to_json(kind: WallKind) -> dict:
    out: dict[str, Any] = {"tag": kind.tag, "twist_options": list(kind.twist_options)}
    for name in ("s", "t", "w"):
        value = getattr(kind, name)
        if value is not None:
            out[name] = list(value)
    for name in ("m", "a"):
        value = getattr(kind, name)
        if value is not None:
            out[name] = value
    return out


def wall_kind_from_json(obj: dict) -> WallKind:
    def pair(name):
        return tuple(obj[name]) if name in obj else None

    return WallKind(obj["tag"], pair("s"), pair("t"), obj.get("m"), obj.get("a"), pair("w"),
                    tuple(obj.get("twist_options", ())))


# -- traces ------------------------------------------------------------------

def _step_to_json(step: ReductionStep) -> dict:
    iso = step.isometry
    return {
        "kind": step.kind,
        "before": _placed_to_json(step.before),
        "after": _placed_to_json(step.after),
        "isometry_word": list(step.isometry_word),
        "isometry": None if iso is None else {"matrix": [list(r) for r in iso.matrix], "anti": iso.anti},
        "params": step.params,
        "checks": _pairs_to_json(step.checks),
    }


def _step_from_json(obj: dict) -> ReductionStep:
    before = _placed_from_json(obj["before"])
    after = _placed_from_json(obj["after"])
    iso = None
    if obj.get("isometry") is not None:
        m = obj["isometry"]
        iso = Isometry(tuple(tuple(r) for r in m["matrix"]), tuple(obj["isometry_word"]),
                       before.lattice, m["anti"], after.lattice)
    return ReductionStep(obj["kind"], before, after, tuple(obj["isometry_word"]), iso,
                         obj["params"], _pairs_from_json(obj["checks"]))


def trace_to_json(trace: ReductionTrace) -> dict:
    return {
        "input": _placed_to_json(trace.input),
        "steps": [_step_to_json(s) for s in trace.steps],
        "n": trace.n,
        "certificate": None if trace.certificate is None else certificate_to_json(trace.certificate),
        "terminal": trace.terminal,
    }


def trace_from_json(obj: dict) -> ReductionTrace:
    cert = obj.get("certificate")
    return ReductionTrace(
        _placed_from_json(obj["input"]),
        [_step_from_json(s) for s in obj["steps"]],
        obj["n"],
        None if cert is None else certificate_from_json(cert),
        obj.get("terminal", ""),
    )


def emit_trace_json(trace: ReductionTrace) -> str:
    return dumps(trace_to_json(trace))


def parse_trace_json(text: str | bytes) -> ReductionTrace:
    return trace_from_json(json.loads(text))


# -- problem files -----------------------------------------------------------

_INT = {"type": "integer"}
_RATIONAL = {
    "oneOf": [
        _INT,
        {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2},
    ]
}
_VECTOR = {
    "type": "object",
    "properties": {"r": _INT, "delta": {"type": "array", "items": _INT}, "s": _INT},
    "required": ["r", "delta", "s"],
    "additionalProperties": False,
}

PROBLEM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "lattice": {
            "type": "object",
            "properties": {
                "gram": {
                    "type": "array",
                    "minItems": 1,
                    "items": {"type": "array", "minItems": 1, "items": _INT},
                },
                "labels": {"type": "array", "items": {"type": "string"}},
            },
            "required": ["gram"],
            "additionalProperties": False,
        },
        "vector": _VECTOR,
        "other": _VECTOR,
        "pair": {"type": "array", "items": _INT, "minItems": 2, "maxItems": 2},
        "stab": {
            "type": "object",
            "properties": {"d": _INT, "alpha": _RATIONAL, "beta": _RATIONAL},
            "required": ["d", "alpha", "beta"],
            "additionalProperties": False,
        },
        "bounds": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2},
        "k_final": {"type": "integer", "minimum": 2},
    },
    "required": ["lattice"],
    "additionalProperties": False,
}

_VALIDATOR = jsonschema.Draft202012Validator(PROBLEM_SCHEMA)


@dataclass(frozen=True)
class ProblemFile:
    lattice: NSLattice
    vector: MukaiVector | None = None
    other: MukaiVector | None = None
    pair: tuple[int, int] | None = None
    stab: StabParam | None = None
    bounds: tuple[int, int] | None = None
    k_final: int | None = None


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def parse_problem(text: str | bytes) -> ProblemFile:
    """Validate and build a problem; every failure names a JSON pointer."""
    try:
        if isinstance(text, bytes):
            text = text.decode("utf-8")
        obj = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"malformed JSON: {exc}", "") from exc
    error = jsonschema.exceptions.best_match(_VALIDATOR.iter_errors(obj))
    if error is not None:
        raise ParseError(f"schema violation: {error.message}", _pointer(error.absolute_path))
    lat = lattice_from_json(obj["lattice"], "/lattice")
    vectors = {}
    for name in ("vector", "other"):
        if name in obj:
            try:
                vectors[name] = vector_from_json(obj[name], lat, f"/{name}")
            except DomainError as exc:
                raise ParseError(str(exc), f"/{name}") from exc
    stab = stab_from_json(obj["stab"], "/stab") if "stab" in obj else None
    if stab is not None and lat.is_rank_one and lat.degree != stab.d:
        raise ParseError(f"stab.d = {stab.d} but lattice has d = {lat.degree}", "/stab/d")
    return ProblemFile(
        lat,
        vectors.get("vector"),
        vectors.get("other"),
        tuple(obj["pair"]) if "pair" in obj else None,
        stab,
        tuple(obj["bounds"]) if "bounds" in obj else None,
        obj.get("k_final"),
    )
