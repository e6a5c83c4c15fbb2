"""Reference frames, circumcircles, circle centers, circular points and radical lines."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cayley_klein import (
    LINE_AT_INFINITY,
    Kind,
    NormalizedPoint,
    PlaneStructure,
    as_normalized,
    barycentric_form,
    classify_plane,
    congruent,
    normalize_point,
)
from .errors import (
    CoincidentArguments,
    CollinearVertices,
    DegenerateConstruction,
    DegenerateQ,
    IsotropicPoint,
    MixedCongruenceClasses,
    NoAnisotropicCenter,
    NotACircle,
    SingularSystem,
    UnsupportedSignature,
)
from .projective import (
    DEFAULT_TOL,
    Conic,
    HLine,
    HPoint,
    ToleranceContext,
    _raw,
    canonical,
    collinear,
    cross_ratio,
    join,
    meet,
    proj_equal,
)


@dataclass(frozen=True)
class ReferenceFrame:
    A: NormalizedPoint
    B: NormalizedPoint
    C: NormalizedPoint
    S: PlaneStructure
    K: HPoint
    O: HPoint
    circum: Conic

    @property
    def regular(self) -> bool:
        return self.S.regular

    @property
    def kind(self) -> Kind:
        return self.S.kind

    @property
    def k(self) -> np.ndarray:
        """Lemoine coordinates (the circumcircle is ``k1 yz + k2 zx + k3 xy = 0``)."""
        if self.S.k is not None:
            return np.asarray(self.S.k, dtype=float)
        return np.asarray(canonical(self.K.v), dtype=float)


@dataclass(frozen=True)
class CircleWithCenter:
    conic: Conic
    center: HPoint


@dataclass(frozen=True)
class CircleDecomposition:
    """Circle ``k1 yz + k2 zx + k3 xy + (p x + q y + r z)(x + y + z) = 0``."""

    p: float
    q: float
    r: float

    @property
    def radical_axis(self) -> np.ndarray:
        return np.array([self.p, self.q, self.r])

    def conic(self, frame: "ReferenceFrame") -> Conic:
        return decomposed_conic(frame.k, (self.p, self.q, self.r))


def decomposed_conic(k: Sequence[float], pqr: Sequence[float]) -> Conic:
    k1, k2, k3 = k
    p, q, r = pqr
    return Conic.from_coefficients(
        xx=p, yy=q, zz=r, yz=k1 + q + r, zx=k2 + p + r, xy=k3 + p + q
    )


def _lemoine_conic(k: Sequence[float]) -> Conic:
    k1, k2, k3 = (float(x) for x in k)
    return Conic.from_coefficients(yz=k1, zx=k2, xy=k3)


def _unit_vertices(S: PlaneStructure, tol):
    return tuple(normalize_point(e, S, tol) for e in np.eye(3))


def frame_regular(qA: float, qB: float, qC: float, tol: ToleranceContext = DEFAULT_TOL) -> ReferenceFrame:
    q = (float(qA), float(qB), float(qC))
    for name, x in zip(("q_A", "q_B", "q_C"), q):
        if abs(abs(x) - 1) <= tol.eps:
            raise DegenerateQ(f"{name} = {x} is excluded")
    S = classify_plane(barycentric_form(q), tol=tol)
    if not S.regular:
        raise UnsupportedSignature("q-parameters give a singular absolute form")
    A, B, C = _unit_vertices(S, tol)
    k = np.array([q[0] - 1, q[1] - 1, q[2] - 1])
    K = HPoint(k, tol)
    O = HPoint(_cevian_quotient(k), tol)
    return ReferenceFrame(A, B, C, S, K, O, _lemoine_conic(k))


def _cevian_quotient(k):
    a, b, c = k
    return np.array([a * (a - b - c), b * (b - c - a), c * (c - a - b)])


def frame_singular(O, tol: ToleranceContext = DEFAULT_TOL) -> ReferenceFrame:
    """Metric-affine frame whose triangle ``ABC`` has circumcenter ``O``."""
    S = classify_plane(np.ones((3, 3)), O, tol=tol)
    return _affine_frame(S, tol)


def frame_from_lemoine(k: Sequence[float], tol: ToleranceContext = DEFAULT_TOL) -> ReferenceFrame:
    """Metric-affine frame fixed by the circumcircle ``k1 yz + k2 zx + k3 xy = 0``."""
    S = classify_plane(np.ones((3, 3)), lemoine=k, tol=tol)
    return _affine_frame(S, tol)


def _affine_frame(S: PlaneStructure, tol) -> ReferenceFrame:
    A, B, C = _unit_vertices(S, tol)
    k = np.asarray(S.k)
    return ReferenceFrame(A, B, C, S, HPoint(k, tol), S.circumcenter_O, _lemoine_conic(k))


def circumcircle_through(R, S_, T, frame: ReferenceFrame, tol: ToleranceContext = DEFAULT_TOL) -> CircleWithCenter:
    """Circumcircle of the triangle ``Δ0(R, S, T)``.

    Regular planes: the circle is built in the barycentric frame of
    ``R°, S°, T°`` from the pairwise polar values and mapped back.
    Metric-affine planes: the radical axis ``(p, q, r)`` against the frame's
    circumcircle is solved from the three incidence conditions.
    """
    plane = frame.S
    pts = [_raw(X) for X in (R, S_, T)]
    if collinear(*pts, tol=tol):
        raise CollinearVertices("circumcircle of collinear points")
    if plane.regular:
        r, s, t = (as_normalized(X, plane, tol) for X in (R, S_, T))
        if not (congruent(r, s, plane, tol) and congruent(r, t, plane, tol)):
            raise MixedCongruenceClasses("vertices lie in different congruence classes")
        sigma = r.sign_class
        qa, qb, qc = plane.bilinear(s.v, t.v), plane.bilinear(t.v, r.v), plane.bilinear(r.v, s.v)
        # local absolute form is sigma*(x^2+y^2+z^2) + 2(qa yz + qb zx + qc xy);
        # subtracting sigma*(x+y+z)^2 leaves the circumcircle of Δ0
        local = np.array([[0.0, qc - sigma, qb - sigma], [qc - sigma, 0.0, qa - sigma], [qb - sigma, qa - sigma, 0.0]])
        basis = np.column_stack([r.v, s.v, t.v])
        inv = np.linalg.inv(basis)
        conic = Conic(inv.T @ local @ inv)
    else:
        rows, rhs = [], []
        k1, k2, k3 = frame.k
        for v in pts:
            v = np.asarray(canonical(v, tol))
            if np.iscomplexobj(v):
                raise IsotropicPoint("circle vertices must be real")
            x, y, z = v
            s = x + y + z
            if tol.is_zero(s, np.abs(v).sum()):
                raise IsotropicPoint("circle vertices must be finite")
            rows.append([x * s, y * s, z * s])
            rhs.append(-(k1 * y * z + k2 * z * x + k3 * x * y))
        mat = np.array(rows)
        if tol.is_zero(np.linalg.det(mat), np.prod(np.linalg.norm(mat, axis=1))):
            raise SingularSystem("radical-axis system is singular")
        pqr = np.linalg.solve(mat, np.array(rhs))
        conic = decomposed_conic(frame.k, pqr)
    return CircleWithCenter(conic, circle_center(conic, plane, tol))


def absolute_normal_form(C: Conic, S: PlaneStructure) -> np.ndarray:
    """Rescale a regular-plane circle to ``phi + c*l l^T``.

    The factor is the double root ``mu`` of ``det(C - mu*phi)``.
    """
    if not S.regular:
        raise UnsupportedSignature("normal form is defined for regular planes")
    phi = S.phi.m
    m = np.asarray(C.m, dtype=float) / C.norm
    vals = np.linalg.eigvals(np.linalg.solve(phi, m))
    _, i, j = min((abs(vals[a] - vals[b]), a, b) for a, b in ((0, 1), (0, 2), (1, 2)))
    mu = (vals[i] + vals[j]).real / 2
    if abs(mu) <= 1e-12:
        raise NotACircle("no nonzero multiple of the absolute form")
    return m / mu


def circle_center(C: Conic, S: PlaneStructure, tol: ToleranceContext = DEFAULT_TOL) -> HPoint:
    """Center of a circle: the pole of its symmetry line.

    In regular planes a circle is ``mu*phi + c*l l^T``; ``mu`` is the double
    root of ``det(C - mu*phi)`` and the center is the pole of ``l`` with
    respect to the absolute form (equivalently the simple eigenvector of
    ``phi^-1 C``).  In metric-affine planes it is the pole of the line at
    infinity.
    """
    if C.is_singular(tol):
        raise NotACircle("singular conics are not circles")
    if not S.regular:
        I, J = _circular_points_from_k(np.asarray(S.k), S.kind)
        for X in (I, J):
            v = canonical(X.v)
            if not tol.is_zero(v @ C.m @ v, C.norm * float(np.vdot(v, v).real) * 1e3):
                raise NotACircle("conic misses a circular point")
        return HPoint(np.linalg.solve(C.m, LINE_AT_INFINITY), tol)
    phi = S.phi.m
    m = np.asarray(C.m, dtype=float) / C.norm
    vals, vecs = np.linalg.eig(np.linalg.solve(phi, m))
    # the double eigenvalue is the pair closest together
    pairs = [(abs(vals[i] - vals[j]), i, j) for i, j in ((0, 1), (0, 2), (1, 2))]
    _, i, j = min(pairs)
    mu = (vals[i] + vals[j]).real / 2
    rest = m - mu * phi
    sv = np.linalg.svd(rest, compute_uv=False)
    if sv[0] <= 1e-7 * np.linalg.norm(phi):
        raise NotACircle("conic coincides with the absolute conic")
    if sv[1] > 1e-7 * sv[0]:
        raise NotACircle("no rank-one difference with the absolute form")
    simple = 3 - i - j
    if abs(vals[simple] - mu) <= 1e-9 * max(1.0, abs(mu)):
        raise NoAnisotropicCenter("symmetry line is tangent to the absolute conic")
    axis = rest[:, int(np.argmax(np.linalg.norm(rest, axis=0)))]
    z = np.linalg.solve(phi, axis)
    eig = vecs[:, simple]
    if not proj_equal(z, eig, ToleranceContext(eps=1e-6, abs_floor=1e-9)):
        raise NotACircle("simple eigenvector disagrees with the pole of the symmetry line")
    # polars of the center with respect to the circle and the absolute coincide
    if not proj_equal(m @ z, phi @ z, ToleranceContext(eps=1e-6, abs_floor=1e-9)):
        raise NotACircle("center polars do not coincide")
    if tol.is_zero(z @ phi @ z, np.linalg.norm(phi) * (z @ z)):
        raise NoAnisotropicCenter("center is isotropic")
    return HPoint(z, tol)


def _circular_points_from_k(k: np.ndarray, kind: Kind) -> tuple[HPoint, HPoint]:
    # rotate coordinates so the largest |k_i| sits in the third slot
    s = (int(np.argmax(np.abs(k))) - 2) % 3
    k1, k2, k3 = np.roll(k, -s)
    r2 = k1 * k1 + k2 * k2 + k3 * k3 - 2 * k1 * k2 - 2 * k1 * k3 - 2 * k2 * k3
    rho = 0.0 if kind is Kind.GALILEAN else np.sqrt(complex(r2))
    if isinstance(rho, complex) and rho.imag == 0:
        rho = rho.real
    i = np.array([rho - k1 + k2 - k3, -rho + k1 - k2 - k3, 2 * k3])
    j = np.array([-rho - k1 + k2 - k3, rho + k1 - k2 - k3, 2 * k3])
    return HPoint(np.roll(i, s)), HPoint(np.roll(j, s))


def circular_points(frame: ReferenceFrame) -> tuple[HPoint, HPoint]:
    """The two points where every circle meets the line at infinity."""
    if frame.regular:
        raise UnsupportedSignature("circular points exist only in metric-affine planes")
    return _circular_points_from_k(frame.k, frame.kind)


def radical_line_at_vertex(V, P1, P2, P3, P4, tol: ToleranceContext = DEFAULT_TOL) -> HLine:
    """Radical line through ``V`` of the circles ``Δ0(V,P1,P2)`` and ``Δ0(V,P3,P4)``.

    ``[V°-P1°] x [V°-P2°]`` is the symmetry line of the first circle, so the
    radical line joins ``V`` to the meet of the two symmetry lines.
    """
    v, p1, p2, p3, p4 = (np.asarray(getattr(X, "v", X), dtype=float) for X in (V, P1, P2, P3, P4))
    try:
        axis1 = join(v - p1, v - p2, tol)
        axis2 = join(v - p3, v - p4, tol)
        X = meet(axis1, axis2, tol)
        if X.proj_equal(v, tol):
            raise DegenerateConstruction("symmetry lines meet at the vertex")
        return join(X, v, tol)
    except (CoincidentArguments, ValueError) as exc:
        if isinstance(exc, DegenerateConstruction):
            raise
        raise DegenerateConstruction(str(exc)) from exc


def circle_decomposition(C: Conic, frame: ReferenceFrame, tol: ToleranceContext = DEFAULT_TOL) -> CircleDecomposition:
    """Write a circle as the frame's circumcircle plus ``(x+y+z)`` times a line."""
    if frame.regular:
        raise UnsupportedSignature("decomposition needs a metric-affine frame")
    a, b, c, d, e, f = np.asarray(C.entries, dtype=float)
    d, e, f = 2 * d, 2 * e, 2 * f  # matrix halves the cross terms
    # (yz, zx, xy) coefficients minus the squares' contributions isolate k
    w = np.array([d - b - c, e - a - c, f - a - b])
    k = frame.k
    ww = float(w @ w)
    if ww == 0:
        raise NotACircle("conic carries no circumcircle part")
    lam = float(k @ w) / ww
    resid = np.linalg.norm(lam * w - k)
    scale = np.linalg.norm(k) + abs(lam) * np.linalg.norm([a, b, c, d, e, f])
    if resid > 1e-7 * scale:
        raise NotACircle(f"conic is not a circle of this plane (residual {resid:.3g})")
    p, q, r = lam * a, lam * b, lam * c
    return CircleDecomposition(float(p), float(q), float(r))


def lines_congruent(L1, L2, frame: ReferenceFrame, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """Metric-affine line congruence: same component of the line at infinity minus the circular points."""
    if frame.regular:
        raise UnsupportedSignature("line congruence here is implemented for metric-affine planes")
    if frame.kind is not Kind.MINKOWSKI:
        return True
    I, J = circular_points(frame)
    x1 = np.cross(_raw(L1), LINE_AT_INFINITY)
    x2 = np.cross(_raw(L2), LINE_AT_INFINITY)
    if proj_equal(x1, x2, tol):
        return True
    return cross_ratio(x1, x2, I, J, tol).real > 0
