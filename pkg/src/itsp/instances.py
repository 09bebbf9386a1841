"""JSON instance documents: parsing, serialization and random generation.

Uncertain scalars are a bare number (crisp), ``{"lo": .., "hi": ..}``
(interval), or ``{"dist": "uniform" | "normal" | "discrete", ...}``.
A UTSP document::

    {"type": "utsp", "speed": 1.0,
     "durations": [[null, {"lo": 1, "hi": 2}, ...], ...]}

An LPUU document::

    {"type": "lpuu", "sense": "maximize", "c": [...],
     "Y": [[...], ...], "Z": [...], "penalty": -1e9}
"""

from __future__ import annotations

import json
import math
from typing import Any

import numpy as np

from .model import (
    DEFAULT_X_MAX,
    Crisp,
    Discrete,
    InstanceError,
    Interval,
    LpuuInstance,
    Normal,
    Uniform,
    UtspInstance,
    validate_instance,
)

_DIST_FIELDS = {
    "uniform": ("a", "b"),
    "normal": ("mu", "sigma"),
    "discrete": ("values", "probs"),
}


def _number(v: Any, path: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InstanceError(f"expected a number, got {v!r}", path)
    v = float(v)
    if not math.isfinite(v):
        raise InstanceError("value must be finite", path)
    return v


def scalar_from_json(v: Any, path: str):
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return Crisp(_number(v, path))
    if not isinstance(v, dict):
        raise InstanceError(f"expected a number or object, got {v!r}", path)
    try:
        if "dist" in v:
            name = v["dist"]
            if name not in _DIST_FIELDS:
                raise InstanceError(f"unknown distribution {name!r}", path)
            fields = _DIST_FIELDS[name]
            if set(v) != {"dist", *fields}:
                raise InstanceError(f"{name} needs exactly the fields {fields}", path)
            if name == "uniform":
                return Uniform(_number(v["a"], path), _number(v["b"], path))
            if name == "normal":
                return Normal(_number(v["mu"], path), _number(v["sigma"], path))
            if not isinstance(v["values"], list) or not isinstance(v["probs"], list):
                raise InstanceError("discrete values/probs must be lists", path)
            return Discrete(
                tuple(_number(a, path) for a in v["values"]),
                tuple(_number(p, path) for p in v["probs"]),
            )
        if set(v) != {"lo", "hi"}:
            raise InstanceError("interval needs exactly the fields 'lo' and 'hi'", path)
        return Interval(_number(v["lo"], path), _number(v["hi"], path))
    except InstanceError as exc:
        if exc.path is None:
            raise InstanceError(str(exc), path) from None
        raise


def scalar_to_json(u) -> Any:
    if isinstance(u, Crisp):
        return u.v
    if isinstance(u, Interval):
        return {"lo": u.lo, "hi": u.hi}
    if isinstance(u, Uniform):
        return {"dist": "uniform", "a": u.a, "b": u.b}
    if isinstance(u, Normal):
        return {"dist": "normal", "mu": u.mu, "sigma": u.sigma}
    if isinstance(u, Discrete):
        return {"dist": "discrete", "values": list(u.values), "probs": list(u.probs)}
    raise TypeError(f"not an uncertain scalar: {u!r}")


def _list(v: Any, path: str) -> list:
    if not isinstance(v, list):
        raise InstanceError(f"expected a list, got {type(v).__name__}", path)
    return v


def instance_from_document(doc: Any, x_max: float = DEFAULT_X_MAX, check_penalty: bool = True):
    """Build and validate an instance from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise InstanceError("document must be a JSON object")
    kind = doc.get("type")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise InstanceError("name must be a string", "name")
    if kind == "utsp":
        allowed = {"type", "name", "speed", "durations", "n"}
        extra = set(doc) - allowed
        if extra:
            raise InstanceError(f"unknown fields {sorted(extra)}")
        rows = _list(doc.get("durations"), "durations")
        grid = []
        for i, row in enumerate(rows):
            row = _list(row, f"durations[{i}]")
            grid.append(
                [
                    None if (i == j and v is None) else scalar_from_json(v, f"durations[{i}][{j}]")
                    for j, v in enumerate(row)
                ]
            )
        for i, row in enumerate(grid):
            if i < len(row):
                row[i] = None
        if "n" in doc and doc["n"] != len(grid):
            raise InstanceError(f"n = {doc['n']} but durations has {len(grid)} rows", "n")
        inst = UtspInstance(grid, _number(doc.get("speed", 1.0), "speed"), name)
    elif kind == "lpuu":
        allowed = {"type", "name", "sense", "c", "Y", "Z", "penalty"}
        extra = set(doc) - allowed
        if extra:
            raise InstanceError(f"unknown fields {sorted(extra)}")
        c = [_number(v, f"c[{j}]") for j, v in enumerate(_list(doc.get("c"), "c"))]
        Y = [
            [scalar_from_json(v, f"Y[{k}][{j}]") for j, v in enumerate(_list(row, f"Y[{k}]"))]
            for k, row in enumerate(_list(doc.get("Y"), "Y"))
        ]
        Z = [scalar_from_json(v, f"Z[{k}]") for k, v in enumerate(_list(doc.get("Z"), "Z"))]
        if "penalty" not in doc:
            raise InstanceError("missing penalty", "penalty")
        inst = LpuuInstance(
            c, Y, Z, doc.get("sense", "maximize"), _number(doc["penalty"], "penalty"), name
        )
    else:
        raise InstanceError(f"type must be 'utsp' or 'lpuu', got {kind!r}", "type")
    return validate_instance(inst, x_max=x_max, check_penalty=check_penalty)


def parse_instance(text: str, x_max: float = DEFAULT_X_MAX, check_penalty: bool = True):
    """Parse a JSON instance document into a validated instance."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"syntax error: {exc}") from None
    return instance_from_document(doc, x_max=x_max, check_penalty=check_penalty)


def instance_to_document(inst) -> dict:
    if isinstance(inst, UtspInstance):
        doc: dict = {"type": "utsp"}
        if inst.name is not None:
            doc["name"] = inst.name
        doc["speed"] = inst.speed
        doc["durations"] = [
            [None if u is None else scalar_to_json(u) for u in row] for row in inst.durations
        ]
        return doc
    if isinstance(inst, LpuuInstance):
        doc = {"type": "lpuu"}
        if inst.name is not None:
            doc["name"] = inst.name
        doc.update(
            sense=inst.sense,
            c=list(inst.c),
            Y=[[scalar_to_json(u) for u in row] for row in inst.Y],
            Z=[scalar_to_json(u) for u in inst.Z],
            penalty=inst.penalty,
        )
        return doc
    raise TypeError(f"not an instance: {type(inst).__name__}")


def dump_document(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def serialize_instance(inst) -> str:
    return dump_document(instance_to_document(inst))


# ------------------------------------------------------------- generation


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) & (2**64 - 1))


def _uncertain(kind: str, center: float, half: float, floor: float | None = 0.0):
    lo, hi = center - half, center + half
    if floor is not None:
        lo = max(floor, lo)
    lo, hi = round(lo, 4), round(hi, 4)
    if kind == "crisp":
        return round(center, 4)
    if kind == "interval":
        return {"lo": lo, "hi": hi}
    if kind == "dist":
        return {"dist": "uniform", "a": lo, "b": hi}
    raise ValueError(f"kind must be interval, dist or crisp, got {kind!r}")


def generate_instance(
    problem: str,
    kind: str,
    size,
    seed: int,
    spread: float = 2.0,
    center_range: tuple[float, float] = (1.0, 10.0),
    x_max: float = DEFAULT_X_MAX,
) -> dict:
    """Random instance document; identical arguments give identical documents.

    ``size`` is the city count for ``problem="utsp"`` and ``(m, n)`` for
    ``problem="lpuu"``.  Centers are uniform in ``center_range`` and half-widths
    uniform in ``[0, spread]``; durations are clipped at zero.  LPUU documents
    get right-hand-side centers scaled by ``n`` so the inner region is usually
    nonempty, and the largest penalty that passes validation under ``x_max``.
    """
    if spread < 0:
        raise ValueError("spread must be nonnegative")
    if kind not in ("interval", "dist", "crisp"):
        raise ValueError(f"kind must be interval, dist or crisp, got {kind!r}")
    rng = _rng(seed)
    lo_c, hi_c = center_range
    if problem == "utsp":
        n = int(size)
        if not 3 <= n <= 18:
            raise ValueError(f"city count must be in 3..18, got {n}")
        grid: list[list] = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                center = rng.uniform(lo_c, hi_c)
                half = rng.uniform(0.0, spread)
                grid[i][j] = grid[j][i] = _uncertain(kind, center, half)
        return {"type": "utsp", "name": f"utsp-{kind}-n{n}-s{seed}", "speed": 1.0, "durations": grid}
    if problem == "lpuu":
        m, n = (int(v) for v in size)
        if not (1 <= m <= 50 and 1 <= n <= 50):
            raise ValueError(f"sizes must be in 1..50, got m={m}, n={n}")
        c = [round(rng.uniform(0.5, 5.0), 4) for _ in range(n)]
        Y = [
            [_uncertain(kind, rng.uniform(lo_c, hi_c), rng.uniform(0.0, spread), None) for _ in range(n)]
            for _ in range(m)
        ]
        Z = [
            _uncertain(kind, n * rng.uniform(lo_c, hi_c), rng.uniform(0.0, spread), None)
            for _ in range(m)
        ]
        penalty = -math.ceil(1.0 + sum(c) * x_max) - 1.0
        return {
            "type": "lpuu",
            "name": f"lpuu-{kind}-m{m}n{n}-s{seed}",
            "sense": "maximize",
            "c": c,
            "Y": Y,
            "Z": Z,
            "penalty": penalty,
        }
    raise ValueError(f"problem must be 'utsp' or 'lpuu', got {problem!r}")
