"""Scenario documents: a plane, a scene, an optional seed and a list of checks.

Numbers are stored as decimal strings so that re-emission reproduces the
input byte for byte.  Canonical text is two-space indented JSON with keys in
the fixed order ``plane, scene, seed, checks``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..cayley_klein import Kind
from ..circles import ReferenceFrame, frame_from_lemoine, frame_regular, frame_singular
from ..errors import GeometryError, ParseError, SchemaError

PLANE_KINDS = tuple(k.value for k in Kind)
REGULAR_KINDS = ("elliptic", "hyperbolic")
SCENE_TYPES = {"quadrilateral": "lmn", "tetragon": "d", "lines": "lines"}
SUITE_NAMES = ("thm1", "thm2", "thm3", "affine", "lemma", "inscribed", "fixedpoint", "fundamentals")


def fmt(x: float) -> str:
    """Shortest decimal string that reads back to the same float."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError("non-finite number")
    return repr(x + 0.0)


@dataclass(frozen=True)
class Scenario:
    kind: str
    param: str  # "q", "O" or "k"
    values: tuple[str, str, str]
    scene_type: str
    scene: tuple  # tuple of decimal strings, or four such triples for "lines"
    seed: Optional[int] = None
    checks: tuple[str, ...] = field(default_factory=tuple)

    # -- numeric views ------------------------------------------------------

    @property
    def plane_vector(self) -> np.ndarray:
        return np.array([float(x) for x in self.values])

    @property
    def scene_vector(self) -> np.ndarray:
        if self.scene_type == "lines":
            return np.array([[float(x) for x in row] for row in self.scene])
        return np.array([float(x) for x in self.scene])

    def frame(self) -> ReferenceFrame:
        """Reference frame of the plane; the declared kind must match."""
        v = self.plane_vector
        try:
            if self.param == "q":
                fr = frame_regular(*v)
            elif self.param == "O":
                fr = frame_singular(v)
            else:
                fr = frame_from_lemoine(v)
        except GeometryError as exc:
            raise SchemaError(f"plane.{self.param}", str(exc)) from exc
        if fr.kind.value != self.kind:
            raise SchemaError("plane.kind", f"declared {self.kind!r} but the parameters give {fr.kind.value!r}")
        return fr

    # -- text ---------------------------------------------------------------

    def to_dict(self) -> dict:
        scene = {"type": self.scene_type, SCENE_TYPES[self.scene_type]: _listify(self.scene)}
        out = {"plane": {"kind": self.kind, self.param: list(self.values)}, "scene": scene}
        if self.seed is not None:
            out["seed"] = self.seed
        out["checks"] = list(self.checks)
        return out


def _listify(x):
    if isinstance(x, tuple):
        return [_listify(y) for y in x]
    return x


def emit_scenario(sc: Scenario) -> str:
    return json.dumps(sc.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _number(value, where: str) -> str:
    if isinstance(value, bool):
        raise SchemaError(where, "expected a number")
    if isinstance(value, (int, float)):
        return fmt(value)
    if isinstance(value, str):
        try:
            x = float(value)
        except ValueError:
            raise SchemaError(where, f"{value!r} is not a decimal number") from None
        if not math.isfinite(x):
            raise SchemaError(where, "number must be finite")
        return value
    raise SchemaError(where, "expected a decimal string")


def _triple(value, where: str) -> tuple[str, str, str]:
    if not isinstance(value, list) or len(value) != 3:
        raise SchemaError(where, "expected a list of three numbers")
    return tuple(_number(x, f"{where}[{i}]") for i, x in enumerate(value))


def _expect_keys(obj, allowed: set, where: str):
    if not isinstance(obj, dict):
        raise SchemaError(where, "expected an object")
    extra = set(obj) - allowed
    if extra:
        raise SchemaError(f"{where}.{sorted(extra)[0]}", "unknown field")


def scenario_from_dict(doc) -> Scenario:
    _expect_keys(doc, {"plane", "scene", "seed", "checks"}, "$")
    for key in ("plane", "scene"):
        if key not in doc:
            raise SchemaError(key, "missing")
    plane = doc["plane"]
    _expect_keys(plane, {"kind", "q", "O", "k"}, "plane")
    kind = plane.get("kind")
    if kind not in PLANE_KINDS:
        raise SchemaError("plane.kind", f"unknown plane kind {kind!r}")
    params = [p for p in ("q", "O", "k") if p in plane]
    if len(params) != 1:
        raise SchemaError("plane", "exactly one of q, O, k is required")
    param = params[0]
    if (kind in REGULAR_KINDS) != (param == "q"):
        raise SchemaError(f"plane.{param}", f"{kind} planes take {'q' if kind in REGULAR_KINDS else 'O or k'}")
    values = _triple(plane[param], f"plane.{param}")

    scene = doc["scene"]
    _expect_keys(scene, {"type", "lmn", "d", "lines"}, "scene")
    stype = scene.get("type")
    if stype not in SCENE_TYPES:
        raise SchemaError("scene.type", f"unknown scene type {stype!r}")
    key = SCENE_TYPES[stype]
    if key not in scene or len(scene) != 2:
        raise SchemaError(f"scene.{key}", f"{stype} scenes need exactly the field {key!r}")
    if stype == "lines":
        rows = scene[key]
        if not isinstance(rows, list) or len(rows) != 4:
            raise SchemaError("scene.lines", "expected four lines")
        data = tuple(_triple(r, f"scene.lines[{i}]") for i, r in enumerate(rows))
    else:
        data = _triple(scene[key], f"scene.{key}")
        if stype == "tetragon" and float(data[0]) <= 0:
            raise SchemaError("scene.d", "d_A must be positive")
        if stype == "tetragon" and kind not in REGULAR_KINDS:
            raise SchemaError("scene.type", "tetragon scenes need a regular plane")

    seed = doc.get("seed")
    if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int) or seed < 0):
        raise SchemaError("seed", "expected a nonnegative integer")
    checks = doc.get("checks", [])
    if not isinstance(checks, list) or not all(isinstance(c, str) for c in checks):
        raise SchemaError("checks", "expected a list of suite names")
    for c in checks:
        if c not in SUITE_NAMES:
            raise SchemaError("checks", f"unknown suite {c!r}")
    return Scenario(kind, param, values, stype, data, seed, tuple(checks))


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    return scenario_from_dict(doc)


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def quadrilateral_scenario(kind: str, param: str, plane, lmn, seed=None, checks=()) -> Scenario:
    return Scenario(kind, param, tuple(fmt(x) for x in plane), "quadrilateral",
                    tuple(fmt(x) for x in lmn), seed, tuple(checks))


def tetragon_scenario(kind: str, q, d, seed=None, checks=()) -> Scenario:
    return Scenario(kind, "q", tuple(fmt(x) for x in q), "tetragon",
                    tuple(fmt(x) for x in d), seed, tuple(checks))
