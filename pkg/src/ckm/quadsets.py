"""Quadrilateral sets, tilde points, the shared-bisector test and cross-ratio angles.

Angles between lines through a finite point ``V`` are measured by the
half-logarithm of the cross ratio of the two legs with the lines from ``V``
to the circular points.  Every identity is checked multiplicatively on the
cross ratios so that no logarithm branch cut is ever crossed.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cayley_klein import LINE_AT_INFINITY, Kind
from .circles import CircleWithCenter, ReferenceFrame, circular_points
from .errors import (
    CoincidentArguments,
    GalileanPlane,
    IsotropicLeg,
    MiquelAtInfinity,
    PointNotOnCircle,
    UnsupportedSignature,
)
from .miquel import _check_distinct, miquel_affine_vector
from .projective import (
    DEFAULT_TOL,
    Conic,
    HLine,
    HPoint,
    ToleranceContext,
    _raw,
    canonical,
    cross_ratio,
    det3,
    join,
    on_conic,
)

DEFAULT_PROBES = ((1.0, 2.0, 3.0), (1.0, 0.0, 0.0), (2.0, -1.0, 0.0))


def tau(q, r, s, t, u, v, w) -> complex:
    """``det(q,t,u)det(q,v,s)det(q,w,r) - det(q,v,w)det(q,t,s)det(q,u,r)``.

    Vanishes when ``(r,s; t,u; v,w)`` is a quadrilateral set on a line not
    through ``q``.
    """
    q, r, s, t, u, v, w = (np.asarray(_raw(x)) for x in (q, r, s, t, u, v, w))
    return complex(
        det3(q, t, u) * det3(q, v, s) * det3(q, w, r)
        - det3(q, v, w) * det3(q, t, s) * det3(q, u, r)
    )


def tau_scale(q, *rest) -> float:
    """Magnitude bound of either product in :func:`tau`."""
    out = float(np.linalg.norm(_raw(q))) ** 3
    for x in rest:
        out *= float(np.linalg.norm(_raw(x)))
    return out


def _affine_mq(l, m, n, frame: ReferenceFrame, tol: ToleranceContext) -> np.ndarray:  # noqa: E741
    if frame.regular:
        raise UnsupportedSignature("tilde points live on the line at infinity of a metric-affine plane")
    _check_distinct(l, m, n, tol)
    mq = miquel_affine_vector(l, m, n, frame.k)
    if tol.is_zero(mq.sum(), np.abs(mq).sum()):
        raise MiquelAtInfinity("the Miquel-Steiner point lies on the line at infinity")
    return mq


def _base_points(l, m, n) -> list[np.ndarray]:  # noqa: E741
    return [np.array(v, dtype=float) for v in (
        (1, 0, 0), (0, 1, 0), (0, 0, 1), (0, n, -m), (n, 0, -l), (m, -l, 0),
    )]


def tilde_points(l, m, n, frame: ReferenceFrame, tol: ToleranceContext = DEFAULT_TOL) -> tuple[HPoint, ...]:  # noqa: E741
    """Where the lines from ``A, ..., F`` through ``Mq`` meet the line at infinity.

    For a base point ``x`` the meet is ``(x1+x2+x3) Mq - (Mq1+Mq2+Mq3) x``.
    """
    mq = _affine_mq(l, m, n, frame, tol)
    sm = mq.sum()
    out = []
    for x in _base_points(l, m, n):
        v = x.sum() * mq - sm * x
        try:
            out.append(HPoint(v, tol))
        except ValueError as exc:
            raise CoincidentArguments("a vertex coincides with the Miquel-Steiner point") from exc
    return tuple(out)


def equilateral_tilde_points(l, m, n) -> tuple[np.ndarray, ...]:  # noqa: E741
    """Closed forms of the tilde points for the Lemoine point ``k = (1,1,1)``."""
    return tuple(np.array(v, dtype=float) for v in (
        (l * (n - m), n * (m - l), m * (l - n)),
        (n * (m - l), m * (l - n), l * (n - m)),
        (m * (n - l), l * (m - n), n * (l - m)),
        ((l - m) * (l - n) * (m - n), l * l * n + l * m * (m - 3 * n) + m * n * n,
         -l * l * m + l * n * (3 * m - n) - m * m * n),
        (-l * l * m + l * n * (3 * m - n) - m * m * n, (l - m) * (l - n) * (m - n),
         l * l * n + l * m * (m - 3 * n) + m * n * n),
        (-l * l * n + l * m * (3 * n - m) - m * n * n, l * l * m + l * n * (n - 3 * m) + m * m * n,
         (l - m) * (l - n) * (n - m)),
    ))


@dataclass(frozen=True)
class LemmaResult:
    holds: bool
    relative_tau: tuple[tuple[float, float], ...]  # per probe: both normalized tau values


def bisector_lemma_values(
    l, m, n, frame: ReferenceFrame,  # noqa: E741
    probes: Sequence = DEFAULT_PROBES,
    tilde: Optional[Sequence] = None,
    tol: ToleranceContext = DEFAULT_TOL,
) -> LemmaResult:
    """Normalized ``tau`` for both septuples ``(I,J;B~,D~;A~,E~)`` and ``(I,J;C~,D~;A~,F~)``."""
    if frame.regular:
        raise UnsupportedSignature("the bisector test needs a metric-affine frame")
    if frame.kind is Kind.GALILEAN:
        raise GalileanPlane("circular points coincide in a galilean plane")
    I, J = circular_points(frame)
    if tilde is None:
        tilde = tilde_points(l, m, n, frame, tol)
    a, b, c, d, e, f = (canonical(_raw(x)) for x in tilde)
    i, j = canonical(I.v), canonical(J.v)
    rows = []
    for probe in probes:
        p = np.asarray(probe, dtype=float)
        if p.sum() == 0:
            raise ValueError("probe must not lie on the line at infinity")
        t1 = abs(tau(p, i, j, b, d, a, e)) / tau_scale(p, i, j, b, d, a, e)
        t2 = abs(tau(p, i, j, c, d, a, f)) / tau_scale(p, i, j, c, d, a, f)
        rows.append((t1, t2))
    flags = [max(r) <= tol.eps for r in rows]
    if len(set(flags)) > 1:
        raise AssertionError(f"bisector test depends on the probe: {rows}")
    return LemmaResult(flags[0], tuple(rows))


def bisector_lemma_check(l, m, n, frame: ReferenceFrame, **kw) -> bool:  # noqa: E741
    """True when the two quadrilateral-set conditions hold for every probe."""
    return bisector_lemma_values(l, m, n, frame, **kw).holds


# ---------------------------------------------------------------------------
# angles


@dataclass(frozen=True)
class AngleMeasure:
    value: complex

    @property
    def angle(self) -> float:
        """Real angle in a euclidean plane (``|Im value|``)."""
        return abs(self.value.imag)


def _require_angles(frame: ReferenceFrame):
    if frame.regular:
        raise UnsupportedSignature("angle measure here is defined for metric-affine planes")
    if frame.kind is Kind.GALILEAN:
        raise GalileanPlane("circular points coincide in a galilean plane")


def _legs(V, P, Q, frame: ReferenceFrame, tol: ToleranceContext):
    v = canonical(_raw(V))
    if tol.is_zero(v.sum(), np.abs(v).sum()):
        raise IsotropicLeg("the vertex lies on the line at infinity")
    I, J = circular_points(frame)
    g, h = join(v, P, tol), join(v, Q, tol)
    for leg in (g, h):
        for X in (I, J):
            x = canonical(X.v)
            if tol.is_zero(abs(canonical(leg.l) @ x), np.linalg.norm(x)):
                raise IsotropicLeg("a leg passes through a circular point")
    return g, h, join(v, I, tol), join(v, J, tol)


def vertex_cross_ratio(V, P, Q, frame: ReferenceFrame, tol: ToleranceContext = DEFAULT_TOL) -> complex:
    """``(VP, VQ; VI, VJ)``."""
    _require_angles(frame)
    if HPoint(_raw(P)).proj_equal(_raw(Q), tol):
        return 1.0 + 0j
    return cross_ratio(*_legs(V, P, Q, frame, tol), tol=tol)


def angle_measure(V, P, Q, frame: ReferenceFrame, tol: ToleranceContext = DEFAULT_TOL) -> AngleMeasure:
    """Half the principal logarithm of :func:`vertex_cross_ratio`."""
    kappa = vertex_cross_ratio(V, P, Q, frame, tol)
    return AngleMeasure(0.5 * cmath.log(kappa))


def _rel_close(a: complex, b: complex, eps: float) -> bool:
    return abs(a - b) <= eps * max(abs(a), abs(b), 1.0)


def inscribed_cross_ratios(C, P, Q, R1, R2, frame: ReferenceFrame, tol: ToleranceContext = DEFAULT_TOL, circle_tol: float = 1e-8):
    conic = C.conic if isinstance(C, CircleWithCenter) else C
    if not isinstance(conic, Conic):
        conic = Conic(conic)
    _require_angles(frame)
    on = ToleranceContext(eps=circle_tol, abs_floor=tol.abs_floor)
    for name, X in (("P", P), ("Q", Q), ("R1", R1), ("R2", R2)):
        if not on_conic(conic, X, on):
            raise PointNotOnCircle(f"{name} is not on the circle")
    return vertex_cross_ratio(R1, P, Q, frame, tol), vertex_cross_ratio(R2, P, Q, frame, tol)


def inscribed_angle_check(C, P, Q, R1, R2, frame: ReferenceFrame, tol: ToleranceContext = DEFAULT_TOL, eps: float = 1e-8) -> bool:
    """Cross ratios seen from two points of a circle agree or are reciprocal."""
    k1, k2 = inscribed_cross_ratios(C, P, Q, R1, R2, frame, tol)
    return _rel_close(k1, k2, eps) or _rel_close(k1 * k2, 1.0, eps)


def triangle_cross_ratios(X, Y, Z, frame: ReferenceFrame, tol: ToleranceContext = DEFAULT_TOL) -> tuple[complex, complex, complex]:
    """Consistently oriented vertex cross ratios ``(XY,XZ)``, ``(YZ,YX)``, ``(ZX,ZY)``."""
    return (
        vertex_cross_ratio(X, Y, Z, frame, tol),
        vertex_cross_ratio(Y, Z, X, frame, tol),
        vertex_cross_ratio(Z, X, Y, frame, tol),
    )


