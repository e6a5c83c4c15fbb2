"""Seeded random scenes by rejection sampling.

Every trial draws from ``numpy.random.default_rng([seed, trial])``, i.e. a
PCG64 stream keyed by the pair, so any trial can be regenerated on its own.
"""
from __future__ import annotations

import numpy as np

from ..cayley_klein import Kind, rho_squared
from ..circles import frame_from_lemoine, frame_regular
from ..errors import GenerationExhausted, GeometryError
from ..miquel import (
    _raw_normalizers,
    miquel_affine_vector,
    quadrilateral_scene,
    tetragon_scene,
    theorem3_check,
)
from .scenario import Scenario, fmt, quadrilateral_scenario, tetragon_scenario

MAX_REJECTIONS = 10_000
Q_MARGIN = 0.05
GAP = 0.05
RADICAND_FLOOR = 1e-6


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(trial)])


def _spread_ok(vals) -> bool:
    a = np.abs(np.asarray(vals, dtype=float))
    top = a.max()
    v = np.asarray(vals, dtype=float)
    return all(abs(v[i] - v[j]) >= GAP * top for i, j in ((0, 1), (1, 2), (2, 0)))


def _retry(draw, what: str):
    for _ in range(MAX_REJECTIONS):
        out = draw()
        if out is not None:
            return out
    raise GenerationExhausted(f"no valid {what} after {MAX_REJECTIONS} draws")


def sample_q(rng, kind: str) -> np.ndarray:
    """Barycentric parameters of a regular plane of the given kind."""
    target = Kind(kind)

    def draw():
        lim = 0.95 if target is Kind.ELLIPTIC else 1.6
        q = rng.uniform(-lim, lim, size=3)
        if np.any(np.abs(np.abs(q) - 1) < Q_MARGIN):
            return None
        try:
            fr = frame_regular(*q)
        except GeometryError:
            return None
        return q if fr.kind is target else None

    return _retry(draw, f"{kind} plane")


def sample_k(rng, kind: str) -> np.ndarray:
    """Lemoine coordinates of a metric-affine plane of the given kind."""
    target = Kind(kind)

    def draw():
        if target is Kind.GALILEAN:
            a, b = rng.uniform(0.3, 2.0, size=2)
            c = a + b if rng.random() < 0.5 else a - b
            k = rng.permutation([a * a, b * b, c * c])
        else:
            k = rng.uniform(0.2, 3.0, size=3) * rng.choice([-1.0, 1.0], size=3)
        if np.min(np.abs(k)) < 0.05 * np.max(np.abs(k)):
            return None
        r2 = rho_squared(k)
        if target is Kind.EUCLIDEAN and r2 > -0.05 * (k @ k):
            return None
        if target is Kind.MINKOWSKI and r2 < 0.05 * (k @ k):
            return None
        try:
            fr = frame_from_lemoine(k)
        except GeometryError:
            return None
        return k if fr.kind is target else None

    return _retry(draw, f"{kind} plane")


def sample_regular_quadrilateral(rng, kind: str):
    """``(q, lmn)`` with all six vertices anisotropic and congruent."""
    def draw():
        q = sample_q(rng, kind)
        lmn = rng.uniform(0.2, 3.0, size=3)
        if not _spread_ok(lmn):
            return None
        l, m, n = lmn  # noqa: E741
        qa, qb, qc = q
        rads = (m * m + n * n - 2 * qa * m * n, l * l + n * n - 2 * qb * l * n, l * l + m * m - 2 * qc * l * m)
        if min(abs(r) for r in rads) < RADICAND_FLOOR:
            return None
        try:
            quadrilateral_scene(frame_regular(*q), l, m, n)
        except GeometryError:
            return None
        return q, lmn

    return _retry(draw, f"{kind} quadrilateral")


def sample_affine_quadrilateral(rng, kind: str, finite_mq: bool = False):
    """``(k, lmn)`` with pairwise distinct nonzero ``l, m, n``."""
    def draw():
        k = sample_k(rng, kind)
        lmn = rng.uniform(0.2, 3.0, size=3) * rng.choice([-1.0, 1.0], size=3)
        if not _spread_ok(lmn):
            return None
        if finite_mq:
            mq = miquel_affine_vector(*lmn, k)
            if abs(mq.sum()) < 1e-3 * np.abs(mq).sum():
                return None
        return k, lmn

    return _retry(draw, f"{kind} quadrilateral")


def _tetragon_ok(q, d) -> bool:
    if min(abs(x) for x in _raw_normalizers(q, d)) < RADICAND_FLOOR:
        return False
    try:
        tetragon_scene(frame_regular(*q), d)
    except GeometryError:
        return False
    return True


def sample_tetragon(rng, kind: str):
    """``(q, d)`` with ``d_A > 0`` and ``A, B, C, D`` and the diagonal points congruent."""
    def draw():
        q = sample_q(rng, kind)
        d = rng.uniform(0.2, 3.0, size=3) * np.array([1.0, *rng.choice([-1.0, 1.0], size=2)])
        return (q, d) if _tetragon_ok(q, d) else None

    return _retry(draw, f"{kind} tetragon")


def sample_concyclic_tetragon(rng, kind: str):
    """``(q, d)`` with ``D`` on the circumcircle, reached along a line through ``A``."""
    def draw():
        q = sample_q(rng, kind)
        ka, kb, kc = np.asarray(q) - 1.0
        s = rng.uniform(-3.0, 3.0)
        den = kb * s + kc
        if abs(den) < 1e-3 or abs(s) < 0.05:
            return None
        d = np.array([-ka * s / den, 1.0, s])
        if d[0] < 0:
            d = -d
        d /= np.max(np.abs(d))
        if not _tetragon_ok(q, d):
            return None
        try:
            theorem3_check(tetragon_scene(frame_regular(*q), d))
        except GeometryError:
            return None
        return q, d

    return _retry(draw, f"concyclic {kind} tetragon")


def random_scene(kind: str, seed: int, scene_type: str = "quadrilateral") -> Scenario:
    """Deterministic random scenario of the given plane kind."""
    rng = np.random.default_rng(int(seed))
    kind = Kind(kind).value
    if scene_type == "tetragon":
        if kind not in ("elliptic", "hyperbolic"):
            raise ValueError("tetragon scenes need a regular plane")
        q, d = sample_tetragon(rng, kind)
        return tetragon_scenario(kind, q, d, seed)
    if scene_type != "quadrilateral":
        raise ValueError(f"unsupported scene type {scene_type!r}")
    if kind in ("elliptic", "hyperbolic"):
        q, lmn = sample_regular_quadrilateral(rng, kind)
        return quadrilateral_scenario(kind, "q", q, lmn, seed)
    k, lmn = sample_affine_quadrilateral(rng, kind)
    return quadrilateral_scenario(kind, "k", k, lmn, seed)


