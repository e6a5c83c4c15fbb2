"""Absolute forms, plane classification, normalized points and congruence."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    CircumcenterForbiddenPosition,
    CoincidentArguments,
    CollinearFrame,
    ComplexPoint,
    IsotropicPoint,
    MissingCircumcenter,
    NotCongruent,
    UnsupportedSignature,
    ZeroCombination,
)
from .projective import DEFAULT_TOL, Conic, HPoint, ToleranceContext, _raw, canonical, chi, proj_equal

BOUNDARY = -1
"""Region index returned by :func:`triangle_region` for points on a side line."""


class Kind(str, enum.Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    EUCLIDEAN = "euclidean"
    MINKOWSKI = "minkowski"
    GALILEAN = "galilean"

    @property
    def is_regular(self) -> bool:
        return self in (Kind.ELLIPTIC, Kind.HYPERBOLIC)

    @property
    def is_metric_affine(self) -> bool:
        return not self.is_regular


LINE_AT_INFINITY = np.array([1.0, 1.0, 1.0])


@dataclass(frozen=True)
class PlaneStructure:
    phi: Conic
    kind: Kind
    circumcenter_O: Optional[HPoint] = None
    q: Optional[tuple] = None
    k: Optional[tuple] = None

    @property
    def regular(self) -> bool:
        return self.kind.is_regular

    def form(self, v) -> float:
        v = np.asarray(_raw(v))
        return v @ self.phi.m @ v

    def bilinear(self, u, v) -> float:
        # polarization keeps the single stored matrix as the only source of truth
        u, v = np.asarray(_raw(u)), np.asarray(_raw(v))
        return 0.5 * (self.form(u + v) - self.form(u) - self.form(v))


@dataclass(frozen=True)
class NormalizedPoint:
    """Representative ``P°`` with ``|phi(P°)| = 1``."""

    v: np.ndarray = field(repr=False)
    sign_class: int

    @property
    def point(self) -> HPoint:
        return HPoint(self.v)

    def __repr__(self):
        comps = ", ".join(f"{c:.6g}" for c in self.v)
        return f"NormalizedPoint(({comps}), sign={self.sign_class:+d})"


@dataclass(frozen=True)
class SegmentMidpoints:
    m_plus: HPoint
    m_minus: HPoint


def signature(m, tol: ToleranceContext = DEFAULT_TOL) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts, zero-thresholded relatively."""
    ev = np.linalg.eigvalsh(np.asarray(m, dtype=float))
    cut = tol.eps * np.max(np.abs(ev))
    return int(np.sum(ev > cut)), int(np.sum(ev < -cut)), int(np.sum(np.abs(ev) <= cut))


def lemoine_from_circumcenter(o: Sequence[float]) -> np.ndarray:
    """``[o_A(o_A-o_B-o_C) : ...]``; the same map sends the Lemoine point back to O."""
    a, b, c = (float(x) for x in o)
    return np.array([a * (a - b - c), b * (b - c - a), c * (c - a - b)])


circumcenter_from_lemoine = lemoine_from_circumcenter


def rho_squared(k: Sequence[float]) -> float:
    k1, k2, k3 = (float(x) for x in k)
    return k1 * k1 + k2 * k2 + k3 * k3 - 2 * k1 * k2 - 2 * k1 * k3 - 2 * k2 * k3


def barycentric_form(q: Sequence[float]) -> np.ndarray:
    qa, qb, qc = (float(x) for x in q)
    return np.array([[1.0, qc, qb], [qc, 1.0, qa], [qb, qa, 1.0]])


def _check_lemoine(k: np.ndarray, tol: ToleranceContext):
    scale = np.max(np.abs(k))
    if scale == 0 or np.any(np.abs(k) <= tol.eps * scale):
        # any zero coordinate makes k1*yz + k2*zx + k3*xy a line pair
        raise CircumcenterForbiddenPosition(f"Lemoine point {k} gives a degenerate circumcircle")


def classify_plane(
    phi,
    circumcenter_O=None,
    *,
    lemoine=None,
    tol: ToleranceContext = DEFAULT_TOL,
) -> PlaneStructure:
    """Classify an absolute form and assemble the matching :class:`PlaneStructure`.

    A regular form yields an elliptic or hyperbolic plane.  A rank-one form
    ``(x+y+z)^2`` needs the circumcenter ``O`` of the reference triangle (or
    its Lemoine point directly via ``lemoine=``) to fix the metric on the line
    at infinity.
    """
    m = np.asarray(getattr(phi, "m", phi), dtype=float)
    m = 0.5 * (m + m.T)
    pos, neg, zero = signature(m, tol)
    if zero == 0:
        if neg > pos:
            m = -m
            pos, neg = neg, pos
        kind = Kind.ELLIPTIC if neg == 0 else Kind.HYPERBOLIC
        q = None
        d = np.diag(m)
        if np.allclose(np.abs(d), np.abs(d[0]), rtol=tol.eps, atol=0) and np.all(np.sign(d) == np.sign(d[0])):
            q = (m[1, 2] / d[0], m[0, 2] / d[0], m[0, 1] / d[0])
            if any(abs(abs(x) - 1) <= tol.eps for x in q):
                raise UnsupportedSignature(f"barycentric parameters {q} hit +-1")
            q = tuple(float(x) for x in q)
        return PlaneStructure(Conic(m), kind, None, q, None)
    if zero == 2:
        g = m[:, int(np.argmax(np.linalg.norm(m, axis=0)))]
        if not proj_equal(g, LINE_AT_INFINITY, tol):
            raise UnsupportedSignature("the double line must be x+y+z=0 in barycentric coordinates")
        if lemoine is not None:
            k = np.asarray(lemoine, dtype=float)
            if k.shape != (3,) or not np.all(np.isfinite(k)):
                raise ValueError("Lemoine point must be a finite real 3-vector")
            _check_lemoine(k, tol)
            o = HPoint(circumcenter_from_lemoine(k), tol)
        else:
            if circumcenter_O is None:
                raise MissingCircumcenter("a singular absolute form needs a circumcenter")
            o = HPoint(_raw(circumcenter_O), tol)
            if not o.is_real:
                raise ComplexPoint("circumcenter must be real")
            for name, ref in zip("ABCG", (np.eye(3)[0], np.eye(3)[1], np.eye(3)[2], LINE_AT_INFINITY)):
                if o.proj_equal(ref, tol):
                    raise CircumcenterForbiddenPosition(f"O coincides with {name}")
            if tol.is_zero(o.v.sum(), np.abs(o.v).sum()):
                raise CircumcenterForbiddenPosition("O is isotropic (on the line at infinity)")
            k = lemoine_from_circumcenter(o.v)
            _check_lemoine(k, tol)
        r2 = rho_squared(k)
        if abs(r2) <= tol.eps * float(k @ k):
            kind = Kind.GALILEAN
        elif r2 > 0:
            kind = Kind.MINKOWSKI
        else:
            kind = Kind.EUCLIDEAN
        phi_s = Conic(np.ones((3, 3)))
        return PlaneStructure(phi_s, kind, o, None, tuple(float(x) for x in k))
    raise UnsupportedSignature(f"signature ({pos},{neg},{zero}) is out of scope")


def absolute_conic_barycentric(S: PlaneStructure) -> Conic:
    if S.regular:
        if S.q is None:
            raise UnsupportedSignature("plane has no barycentric parameters")
        return Conic(barycentric_form(S.q))
    return Conic(np.ones((3, 3)))


def normalize_point(P, S: PlaneStructure, tol: ToleranceContext = DEFAULT_TOL) -> NormalizedPoint:
    p = canonical(_raw(P), tol)
    if np.iscomplexobj(p):
        raise ComplexPoint("only real points have normalizations")
    val = S.form(p)
    if tol.is_zero(val, S.phi.norm * float(p @ p)):
        raise IsotropicPoint(f"point {p} is isotropic")
    v = chi(p) / np.sqrt(abs(val)) * p
    v.setflags(write=False)
    return NormalizedPoint(v, 1 if S.form(v) > 0 else -1)


def as_normalized(P, S: PlaneStructure, tol: ToleranceContext = DEFAULT_TOL) -> NormalizedPoint:
    if isinstance(P, NormalizedPoint):
        return P
    return normalize_point(P, S, tol)


def congruent(P, Q, S: PlaneStructure, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    a, b = as_normalized(P, S, tol), as_normalized(Q, S, tol)
    if S.kind is Kind.HYPERBOLIC:
        return a.sign_class == b.sign_class
    return True


def midpoints(P, Q, S: PlaneStructure, tol: ToleranceContext = DEFAULT_TOL) -> SegmentMidpoints:
    a, b = as_normalized(P, S, tol), as_normalized(Q, S, tol)
    if proj_equal(a.v, b.v, tol):
        raise CoincidentArguments("a segment needs two distinct endpoints")
    if not congruent(a, b, S, tol):
        raise NotCongruent("only congruent endpoints bound segments with midpoints")
    return SegmentMidpoints(HPoint(a.v + b.v, tol), HPoint(a.v - b.v, tol))


def combine(coeffs: Sequence[float], points: Sequence[NormalizedPoint], tol: ToleranceContext = DEFAULT_TOL) -> HPoint:
    """``[alpha P° + beta Q° + gamma R°]``."""
    v = sum(float(c) * p.v for c, p in zip(coeffs, points))
    scale = sum(abs(float(c)) * np.linalg.norm(p.v) for c, p in zip(coeffs, points))
    if tol.is_zero(np.linalg.norm(v), scale):
        raise ZeroCombination("linear combination vanishes")
    return HPoint(v, tol)


def triangle_region(P, R: NormalizedPoint, S: NormalizedPoint, T: NormalizedPoint, tol: ToleranceContext = DEFAULT_TOL) -> int:
    """Which of the four triangles on ``R, S, T`` contains ``P``.

    Returns 0 when all frame coefficients share a sign, ``i`` (1-based)
    when coefficient ``i`` is the odd one out, and :data:`BOUNDARY` when
    ``P`` lies on a side line.
    """
    frame = np.column_stack([R.v, S.v, T.v])
    if tol.is_zero(np.linalg.det(frame), np.prod(np.linalg.norm(frame, axis=0))):
        raise CollinearFrame("frame vertices are collinear")
    p = canonical(_raw(P), tol)
    if np.iscomplexobj(p):
        raise ComplexPoint("regions are defined for real points")
    c = np.linalg.solve(frame, p)
    if np.any(np.abs(c) <= tol.eps * np.max(np.abs(c))):
        return BOUNDARY
    signs = np.sign(c)
    if np.all(signs == signs[0]):
        return 0
    for i in range(3):
        others = np.delete(signs, i)
        if others[0] == others[1] and signs[i] != others[0]:
            return i + 1
    raise AssertionError("unreachable sign pattern")
