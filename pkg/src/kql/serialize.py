"""JSON encodings (schema ``kql/1``).

Rationals are written as ``"p/q"`` strings (``"p"`` when integral) and
complex numbers as ``[re, im]`` pairs. Output is canonical: keys sorted,
no whitespace variation, floats rounded to 12 significant digits.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from . import linalg as la
from .descent import InvariantIdeal
from .ideals import EquivariantIdeal
from .mckay import INF, GroupSpec, framed_quiver
from .monad import MonadData, SupportCycle
from .pimodule import ADHMDatum, QuiverModule
from .stability import StabilityParameter

SCHEMA = "kql/1"


class SchemaError(ValueError):
    """Malformed input; ``path`` points at the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _float(x: float) -> float:
    return float(f"{x:.12g}") + 0.0


def scalar(x) -> Any:
    if isinstance(x, (complex, np.complexfloating)):
        return [_float(x.real), _float(x.imag)]
    if isinstance(x, (float, np.floating)):
        return [_float(x), 0.0]
    f = Fraction(x)
    return str(f)


def parse_scalar(x, path: str, exact: bool):
    if isinstance(x, list):
        if exact:
            raise SchemaError(path, "complex entry in an exact (rational) object")
        if len(x) != 2 or not all(isinstance(c, (int, float)) for c in x):
            raise SchemaError(path, "complex entries are [re, im] pairs")
        return complex(x[0], x[1])
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise SchemaError(path, f"expected a rational string, got {x!r}")
    try:
        f = Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, f"invalid rational {x!r}") from exc
    return f if exact else complex(f)


def matrix(a: np.ndarray) -> list:
    return [[scalar(v) for v in row] for row in np.asarray(a)]


def parse_matrix(rows, shape: tuple, path: str, field) -> np.ndarray:
    exact = isinstance(field, la.Exact)
    if not isinstance(rows, list) or len(rows) != shape[0]:
        raise SchemaError(path, f"expected {shape[0]} rows")
    out = la.zeros(*shape, field)
    for p, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != shape[1]:
            raise SchemaError(f"{path}[{p}]", f"expected {shape[1]} entries")
        for q, v in enumerate(row):
            out[p, q] = parse_scalar(v, f"{path}[{p}][{q}]", exact)
    return out


def field_json(field) -> dict:
    """``scalars`` entry (plus ``tol`` for complex data) of an object."""
    if isinstance(field, la.Exact):
        return {"scalars": "rational"}
    return {"scalars": "complex", "tol": field.tol}


def parse_field(obj: dict):
    kind = obj.get("scalars", "rational")
    if kind == "rational":
        return la.EXACT
    if kind == "complex":
        tol = obj.get("tol", la.DEFAULT_TOL)
        if isinstance(tol, bool) or not isinstance(tol, (int, float)) or not tol > 0:
            raise SchemaError("tol", "tolerance must be a positive number")
        return la.ComplexApprox(float(tol))
    raise SchemaError("scalars", 'expected "rational" or "complex"')


def module_json(m: QuiverModule) -> dict:
    q = m.quiver
    return {
        "schema": SCHEMA,
        "kind": "module",
        "group": str(q.group),
        "r": q.r,
        **field_json(m.field),
        "dim": {"inf": m.dim_inf, "v": list(m.v)},
        "arrows": {a.name: matrix(m.maps[a.name]) for a in q.arrows if m.maps[a.name].size},
    }


def _group(obj, path: str) -> GroupSpec:
    try:
        return GroupSpec.parse(obj)
    except (ValueError, TypeError, AttributeError) as exc:
        raise SchemaError(path, f"unknown group {obj!r}") from exc


def _int(obj, path: str, low: int = 0) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int) or obj < low:
        raise SchemaError(path, f"expected an integer >= {low}")
    return obj


def parse_module(obj: dict) -> QuiverModule:
    _expect_kind(obj, "module")
    g = _group(obj.get("group"), "group")
    r = _int(obj.get("r"), "r", 1)
    field = parse_field(obj)
    q = framed_quiver(g, r)
    dim = obj.get("dim")
    if not isinstance(dim, dict):
        raise SchemaError("dim", 'expected {"inf": 0 or 1, "v": [...]}')
    for key in dim:
        if key not in ("inf", "v"):
            raise SchemaError(f"dim.{key}", "unknown key")
    dim_inf = _int(dim.get("inf", 1), "dim.inf")
    if dim_inf > 1:
        raise SchemaError("dim.inf", "framing vertex carries dimension 0 or 1")
    v = dim.get("v")
    if not isinstance(v, list) or len(v) != len(q.dynkin_vertices):
        raise SchemaError("dim.v", f"expected {len(q.dynkin_vertices)} vertex dimensions")
    dims = {INF: dim_inf}
    for k, vert in enumerate(q.dynkin_vertices):
        dims[vert] = _int(v[k], f"dim.v[{k}]")
    maps_obj = obj.get("arrows", {})
    if not isinstance(maps_obj, dict):
        raise SchemaError("arrows", "expected an object keyed by arrow name")
    arrows = {a.name: a for a in q.arrows}
    maps = {}
    for name, rows in maps_obj.items():
        if name not in arrows:
            raise SchemaError(f"arrows.{name}", "unknown arrow")
        a = arrows[name]
        maps[name] = parse_matrix(rows, (dims[a.head], dims[a.tail]), f"arrows.{name}", field)
    return QuiverModule(q, dims, maps, field)


def adhm_json(d: ADHMDatum) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "adhm",
        "group": f"A{d.m}",
        **field_json(d.field),
        "weights": list(d.weights),
        "r": d.r,
        "B1": matrix(d.B1),
        "B2": matrix(d.B2),
        "i": matrix(d.i),
        "j": matrix(d.j),
    }


def parse_adhm(obj: dict) -> ADHMDatum:
    _expect_kind(obj, "adhm")
    g = _group(obj.get("group"), "group")
    if not g.is_cyclic:
        raise SchemaError("group", "ADHM data are defined for cyclic groups")
    field = parse_field(obj)
    weights = obj.get("weights")
    if not isinstance(weights, list):
        raise SchemaError("weights", "expected a list of integers")
    weights = [_int(w, f"weights[{k}]") for k, w in enumerate(weights)]
    n = len(weights)
    r = _int(obj.get("r"), "r")
    mats = {}
    for name, shape in (("B1", (n, n)), ("B2", (n, n)), ("i", (n, r)), ("j", (r, n))):
        mats[name] = parse_matrix(obj.get(name, [[]] * shape[0] if shape[1] == 0 else None), shape, name, field)
    try:
        return ADHMDatum(g.m, tuple(weights), mats["B1"], mats["B2"], mats["i"], mats["j"], field)
    except ValueError as exc:
        raise SchemaError("weights", str(exc)) from exc


def ideal_json(ideal: EquivariantIdeal) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "ideal",
        "group": f"A{ideal.m}",
        "generators": ideal.generator_strings(),
        "colength": ideal.colength,
    }


def parse_ideal(obj: dict) -> EquivariantIdeal:
    _expect_kind(obj, "ideal")
    g = _group(obj.get("group"), "group")
    if not g.is_cyclic:
        raise SchemaError("group", "ideals are handled for cyclic groups")
    gens = obj.get("generators")
    if not isinstance(gens, list) or not all(isinstance(s, str) for s in gens):
        raise SchemaError("generators", "expected a list of polynomial strings")
    try:
        return EquivariantIdeal.from_generators(gens, g.m)
    except ValueError as exc:
        raise SchemaError("generators", str(exc)) from exc


def invariant_ideal_json(j: InvariantIdeal, colength: int) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "invariant_ideal",
        "m": j.m,
        "relation": f"u*v - w^{j.m}" if j.m > 1 else "u*v - w",
        "generators": j.generator_strings(),
        "colength": colength,
    }


def monad_json(md: MonadData) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "monad",
        **field_json(md.field),
        "dims": list(md.dims),
        "A": {k: matrix(v) for k, v in md.A.items()},
        "B": {k: matrix(v) for k, v in md.B.items()},
    }


def support_json(cycle: SupportCycle) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "support_cycle",
        "points": [[scalar(x), scalar(y), mult] for x, y, mult in cycle.points],
        "total": cycle.total,
    }


def stability_json(t: StabilityParameter) -> dict:
    return {
        "theta_inf": scalar(t.theta_inf),
        "theta": [scalar(x) for x in t.theta],
        "positivity_set": sorted(t.positivity_set),
    }


def _expect_kind(obj, kind: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError("$", "expected a JSON object")
    if obj.get("schema") != SCHEMA:
        raise SchemaError("schema", f"expected {SCHEMA!r}")
    if obj.get("kind") != kind:
        raise SchemaError("kind", f"expected {kind!r}, got {obj.get('kind')!r}")


def dumps(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
