"""Miquel-Steiner points of quadrilaterals and tetragons.

Regular planes (elliptic, hyperbolic) use closed forms in barycentric
coordinates together with an independent radical-line construction.
Metric-affine planes use the closed form for the common point of the four
circumcircles.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cayley_klein import Kind, NormalizedPoint, congruent, normalize_point
from .circles import (
    CircleWithCenter,
    ReferenceFrame,
    absolute_normal_form,
    circumcircle_through,
    circle_decomposition,
    decomposed_conic,
    radical_line_at_vertex,
)
from .errors import (
    CoincidentParameters,
    DegenerateScene,
    DegenerateTetragon,
    GeometryError,
    IsotropicDiagonalPoint,
    IsotropicPoint,
    MiquelPointAbsent,
    MixedCongruenceClasses,
    NoConvergence,
    NonConcurrentRadicalLines,
    NotCongruent,
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
    incidence,
    join,
    meet,
    on_conic,
    proj_distance,
    split_degenerate,
)

# radical lines of a valid scene agree far below this; larger gaps mean the
# scene violates the theorem's hypotheses
CONCURRENCY_TOL = 1e-7


class Contact(str, enum.Enum):
    TRANSVERSAL = "transversal"
    TANGENTIAL_AT_INFINITY = "tangential_at_infinity"


@dataclass(frozen=True)
class MiquelResult:
    point: HPoint
    contact: Contact
    congruence_ok: bool


@dataclass(frozen=True)
class QuadrilateralScene:
    """Reference triangle ``ABC`` cut by the line ``l x + m y + n z = 0``.

    The line meets the side lines in ``D=[0:n:-m]``, ``E=[n:0:-l]`` and
    ``F=[m:-l:0]``; ``d, e, f`` are the reciprocal norms of those vectors.
    """

    frame: ReferenceFrame
    l: float  # noqa: E741
    m: float
    n: float
    D: NormalizedPoint
    E: NormalizedPoint
    F: NormalizedPoint
    d: float
    e: float
    f: float

    @property
    def vertices(self) -> dict[str, NormalizedPoint]:
        fr = self.frame
        return {"A": fr.A, "B": fr.B, "C": fr.C, "D": self.D, "E": self.E, "F": self.F}

    @property
    def fourth_line(self) -> np.ndarray:
        return np.array([self.l, self.m, self.n])


def quadrilateral_scene(frame: ReferenceFrame, l, m, n, tol: ToleranceContext = DEFAULT_TOL) -> QuadrilateralScene:  # noqa: E741
    l, m, n = float(l), float(m), float(n)  # noqa: E741
    if min(abs(l), abs(m), abs(n)) <= tol.eps * max(abs(l), abs(m), abs(n), 1.0):
        raise DegenerateScene("the fourth line passes through a vertex")
    S = frame.S
    if S.regular and min(l, m, n) <= 0:
        raise DegenerateScene("regular scenes use positive l, m, n")
    if not S.regular:
        _check_distinct(l, m, n, tol)
    raw = {"D": (0.0, n, -m), "E": (n, 0.0, -l), "F": (m, -l, 0.0)}
    pts = {}
    try:
        for name, v in raw.items():
            pts[name] = normalize_point(v, S, tol)
    except IsotropicPoint as exc:
        raise DegenerateScene(f"vertex is isotropic: {exc}") from exc
    if S.regular:
        qa, qb, qc = S.q
        d = 1 / np.sqrt(abs(m * m + n * n - 2 * qa * m * n))
        e = 1 / np.sqrt(abs(l * l + n * n - 2 * qb * l * n))
        f = 1 / np.sqrt(abs(l * l + m * m - 2 * qc * l * m))
        for P in pts.values():
            if not congruent(P, frame.A, S, tol):
                raise MixedCongruenceClasses("scene vertices lie in different congruence classes")
    else:
        d, e, f = (1 / abs(sum(v)) for v in raw.values())
    return QuadrilateralScene(frame, l, m, n, pts["D"], pts["E"], pts["F"], float(d), float(e), float(f))


def _check_distinct(l, m, n, tol):  # noqa: E741
    scale = max(abs(l), abs(m), abs(n))
    for a, b in ((l, m), (m, n), (n, l)):
        if abs(a - b) <= tol.eps * scale:
            raise CoincidentParameters("l, m, n must be pairwise distinct")


# ---------------------------------------------------------------------------
# regular planes: quadrilateral


def miquel_closed_form(l, m, n, d, e, f) -> np.ndarray:  # noqa: E741
    """Radical center of the four circumcircles as a function of ``l, m, n, d, e, f``."""
    return np.array([
        e * f * (d * (m - n) + 1),
        -d * f * (e * (l - n) + 1),
        d * e * (f * (l - m) + 1),
    ])


def miquel_point_regular(scene: QuadrilateralScene, tol: ToleranceContext = DEFAULT_TOL) -> MiquelResult:
    if not scene.frame.regular:
        raise UnsupportedSignature("closed form applies to regular planes")
    v = miquel_closed_form(scene.l, scene.m, scene.n, scene.d, scene.e, scene.f)
    if not np.any(np.abs(v) > tol.abs_floor):
        raise DegenerateScene("closed form vanishes")
    return MiquelResult(HPoint(v, tol), Contact.TRANSVERSAL, True)


def radical_lines(scene: QuadrilateralScene, tol: ToleranceContext = DEFAULT_TOL) -> dict[str, HLine]:
    """The six radical lines, each through the shared vertex of two circumcircles."""
    V = scene.vertices
    A, B, C, D, E, F = (V[x] for x in "ABCDEF")
    return {
        "A": radical_line_at_vertex(A, B, C, E, F, tol),
        "B": radical_line_at_vertex(B, A, C, D, F, tol),
        "C": radical_line_at_vertex(C, A, B, D, E, tol),
        "D": radical_line_at_vertex(D, B, F, C, E, tol),
        "E": radical_line_at_vertex(E, A, F, C, D, tol),
        "F": radical_line_at_vertex(F, A, E, B, D, tol),
    }


def miquel_point_radical(scene: QuadrilateralScene, tol: ToleranceContext = DEFAULT_TOL) -> HPoint:
    if not scene.frame.regular:
        raise UnsupportedSignature("radical-line construction applies to regular planes")
    V = scene.vertices
    A, B, C, D, E, F = (V[x] for x in "ABCDEF")
    la = radical_line_at_vertex(A, B, C, E, F, tol)
    lb = radical_line_at_vertex(B, A, C, D, F, tol)
    lc = radical_line_at_vertex(C, A, B, D, E, tol)
    M = meet(la, lb, tol)
    if proj_distance(meet(la, lc, tol), M) > CONCURRENCY_TOL:
        raise NonConcurrentRadicalLines("radical lines through A, B, C are not concurrent")
    return M


def circumcircles(scene: QuadrilateralScene, tol: ToleranceContext = DEFAULT_TOL) -> dict[str, CircleWithCenter]:
    """Circumcircles of the component triangles ``ABC, AEF, CDE, BDF``."""
    V = scene.vertices
    out = {}
    for name in ("ABC", "AEF", "CDE", "BDF"):
        out[name] = circumcircle_through(*(V[c] for c in name), scene.frame, tol)
    return out


def radical_line_from_pencil(C1: Conic, C2: Conic, V, S, tol: ToleranceContext = DEFAULT_TOL) -> HLine:
    """Radical line of two circles through their common point ``V``.

    With both circles scaled to ``phi + c*l l^T`` the difference is a line
    pair; the component through ``V`` joins ``V`` to the second common point
    (or is the common tangent when the circles touch at ``V``).
    """
    diff = absolute_normal_form(C1, S) - absolute_normal_form(C2, S)
    v = np.asarray(_raw(V), dtype=float)
    comps = split_degenerate(diff, tol)
    res = [abs(incidence(v, g)) / (np.linalg.norm(g) * np.linalg.norm(v)) for g in comps]
    g = comps[int(np.argmin(res))]
    if min(res) > CONCURRENCY_TOL:
        raise DegenerateScene("shared vertex is off the radical pencil member")
    return HLine(g, tol)


def miquel_point_pencil(scene: QuadrilateralScene, tol: ToleranceContext = DEFAULT_TOL) -> HPoint:
    """Miquel-Steiner point from the circumcircle conics alone.

    Meets the radical lines through ``A`` and ``B`` obtained from the
    pencils of the circumcircles, without the vertex normalization formulas.
    """
    if not scene.frame.regular:
        raise UnsupportedSignature("pencil construction applies to regular planes")
    circ = {k: c.conic for k, c in circumcircles(scene, tol).items()}
    V = scene.vertices
    S = scene.frame.S
    la = radical_line_from_pencil(circ["ABC"], circ["AEF"], V["A"], S, tol)
    lb = radical_line_from_pencil(circ["ABC"], circ["BDF"], V["B"], S, tol)
    lc = radical_line_from_pencil(circ["ABC"], circ["CDE"], V["C"], S, tol)
    M = meet(la, lb, tol)
    if proj_distance(meet(la, lc, tol), M) > CONCURRENCY_TOL:
        raise NonConcurrentRadicalLines("pencil radical lines are not concurrent")
    return M


# ---------------------------------------------------------------------------
# generic four lines (oracle for the tetragon closed forms)


def quadrilateral_vertices(lines: Sequence, tol: ToleranceContext = DEFAULT_TOL) -> dict[tuple[int, int], HPoint]:
    ls = [np.asarray(_raw(x)) for x in lines]
    if len(ls) != 4:
        raise ValueError("a quadrilateral has four lines")
    for trio in itertools.combinations(range(4), 3):
        a, b, c = (canonical(ls[i]) for i in trio)
        if abs(np.linalg.det(np.array([a, b, c]))) <= tol.eps * 10:
            raise DegenerateScene(f"lines {trio} are concurrent")
    return {(i, j): meet(ls[i], ls[j], tol) for i, j in itertools.combinations(range(4), 2)}


def miquel_point_of_lines(lines: Sequence, frame: ReferenceFrame, tol: ToleranceContext = DEFAULT_TOL) -> HPoint:
    """Miquel-Steiner point of four lines in general position.

    Regular planes: meet of the radical lines through shared vertices of
    the component circumcircles (vertices normalized with the sign rule).
    Metric-affine planes: meet of the radical axes of two circle pairs.
    """
    verts = quadrilateral_vertices(lines, tol)
    S = frame.S
    tris = {}
    for omit in range(4):
        idx = [i for i in range(4) if i != omit]
        tris[omit] = [pair for pair in itertools.combinations(idx, 2)]
    if S.regular:
        try:
            normed = {key: normalize_point(p, S, tol) for key, p in verts.items()}
        except IsotropicPoint as exc:
            raise DegenerateScene(str(exc)) from exc
        ref = next(iter(normed.values()))
        if not all(congruent(ref, p, S, tol) for p in normed.values()):
            raise MixedCongruenceClasses("quadrilateral vertices lie in different congruence classes")
        rls = []
        for a, b in itertools.combinations(range(4), 2):
            shared = tuple(i for i in range(4) if i not in (a, b))
            others = [normed[p] for p in tris[a] if p != shared] + [normed[p] for p in tris[b] if p != shared]
            rls.append(radical_line_at_vertex(normed[shared], *others, tol=tol))
        M = meet(rls[0], rls[1], tol)
        for L in rls[2:]:
            if abs(incidence(M, L)) > CONCURRENCY_TOL:
                raise NonConcurrentRadicalLines("radical lines are not concurrent")
        return M
    decomps = {}
    for omit in range(4):
        circ = circumcircle_through(*(verts[p] for p in tris[omit]), frame, tol)
        decomps[omit] = circle_decomposition(circ.conic, frame, tol).radical_axis
    ax1 = decomps[0] - decomps[1]
    ax2 = decomps[0] - decomps[2]
    return meet(ax1, ax2, tol)


# ---------------------------------------------------------------------------
# tetragons


@dataclass(frozen=True)
class TetragonScene:
    frame: ReferenceFrame
    D: HPoint
    d: tuple
    P1: HPoint
    P2: HPoint
    P3: HPoint
    alpha: float
    beta: float
    gamma: float
    delta: float


def _raw_normalizers(q, d):
    qa, qb, qc = q
    da, db, dc = d
    p1 = db * db + 2 * qa * db * dc + dc * dc
    p2 = da * da + 2 * qb * da * dc + dc * dc
    p3 = da * da + 2 * qc * da * db + db * db
    pd = da * da + db * db + dc * dc + 2 * qa * db * dc + 2 * qb * dc * da + 2 * qc * da * db
    return p1, p2, p3, pd


def tetragon_normalizers(frame: ReferenceFrame, D, tol: ToleranceContext = DEFAULT_TOL) -> tuple[float, float, float, float]:
    """Reciprocal norms of the diagonal points ``P1, P2, P3`` and of ``D``.

    ``alpha`` carries the sign of ``d_B``.
    """
    if not frame.regular:
        raise UnsupportedSignature("tetragon closed forms apply to regular planes")
    d = _tetragon_coords(D)
    vals = _raw_normalizers(frame.S.q, d)
    scale = float(np.dot(d, d)) * (1 + max(abs(x) for x in frame.S.q))
    for name, val in zip(("P1", "P2", "P3", "D"), vals):
        if tol.is_zero(val, scale):
            raise IsotropicDiagonalPoint(f"{name} is isotropic")
    p1, p2, p3, pd = vals
    alpha = float(np.sign(d[1])) / np.sqrt(abs(p1))
    return alpha, 1 / np.sqrt(abs(p2)), 1 / np.sqrt(abs(p3)), 1 / np.sqrt(abs(pd))


def _tetragon_coords(D) -> np.ndarray:
    d = np.asarray(getattr(D, "v", D), dtype=float)
    if d.shape != (3,) or not np.all(np.isfinite(d)):
        raise ValueError("D must be a finite real 3-vector")
    if d[0] < 0:
        d = -d
    return d


def tetragon_scene(frame: ReferenceFrame, D, tol: ToleranceContext = DEFAULT_TOL) -> TetragonScene:
    d = _tetragon_coords(D)
    scale = np.max(np.abs(d))
    if scale == 0 or np.any(np.abs(d) <= tol.eps * scale):
        raise DegenerateTetragon("D lies on a side line of the reference triangle")
    alpha, beta, gamma, delta = tetragon_normalizers(frame, d, tol)
    da, db, dc = d
    P1 = HPoint([0.0, abs(db), np.sign(db) * dc], tol)
    P2 = HPoint([da, 0.0, dc], tol)
    P3 = HPoint([da, db, 0.0], tol)
    S = frame.S
    for name, P in (("D", d), ("P1", P1), ("P2", P2), ("P3", P3)):
        if not congruent(normalize_point(P, S, tol), frame.A, S, tol):
            raise NotCongruent(f"{name} is not congruent to the reference vertices")
    return TetragonScene(frame, HPoint(d, tol), tuple(float(x) for x in d), P1, P2, P3, alpha, beta, gamma, delta)


def tetragon_miquel_triple(scene: TetragonScene) -> tuple[HPoint, HPoint, HPoint]:
    """``(Mq_A, Mq_B, Mq_C) = (Mq_ABDC, Mq_ABCD, Mq_ADBC)``: the Miquel-Steiner triangle."""
    da, db, dc = scene.d
    a, b, g, dl = scene.alpha, scene.beta, scene.gamma, scene.delta
    abcd = [
        da * dl * g * (a * (db + dc) - 1),
        db * (dl * (db * a * g - a - g) + a * g),
        dc * dl * a * (g * (da + db) - 1),
    ]
    abdc = [
        da * (dl * (da * b * g - b - g) + b * g),
        db * dl * g * (b * (da + dc) - 1),
        dc * dl * b * (g * (da + db) - 1),
    ]
    adbc = [
        da * dl * b * (a * (db + dc) - 1),
        db * dl * a * (b * (da + dc) - 1),
        dc * (dl * (dc * a * b - a - b) + a * b),
    ]
    try:
        return HPoint(abdc), HPoint(abcd), HPoint(adbc)
    except ValueError as exc:
        raise DegenerateTetragon(str(exc)) from exc


def tetragon_quadrilaterals(scene: TetragonScene) -> dict[str, list[np.ndarray]]:
    """Side lines of the quadrilaterals whose Miquel points form the triangle."""
    A, B, C = np.eye(3)
    D = np.asarray(scene.d)
    x = np.cross
    return {
        "ABCD": [x(A, B), x(B, C), x(C, D), x(D, A)],
        "ABDC": [x(A, B), x(B, D), x(D, C), x(C, A)],
        "ADBC": [x(A, D), x(D, B), x(B, C), x(C, A)],
    }


def perspector(scene: TetragonScene) -> HPoint:
    """Center of perspectivity of ``ABC`` and the Miquel-Steiner triangle."""
    da, db, dc = scene.d
    a, b, g = scene.alpha, scene.beta, scene.gamma
    v = [
        da * b * g * (a * (db + dc) - 1),
        db * a * g * (b * (da + dc) - 1),
        dc * a * b * (g * (da + db) - 1),
    ]
    try:
        return HPoint(v)
    except ValueError as exc:
        raise DegenerateTetragon(str(exc)) from exc


def miquel_transformation(frame: ReferenceFrame, D, tol: ToleranceContext = DEFAULT_TOL) -> HPoint:
    return perspector(tetragon_scene(frame, D, tol))


def _fixed_point_residual(q, d) -> np.ndarray:
    p1, p2, p3, _ = _raw_normalizers(q, d)
    inv_a = np.sign(d[1]) * np.sqrt(abs(p1))
    inv_b, inv_g = np.sqrt(abs(p2)), np.sqrt(abs(p3))
    return np.array([d[0] - d[1] - (inv_b - inv_a), d[0] - d[2] - (inv_g - inv_a), d.sum() - 3.0])


def _newton(q, start, max_iter=100, target=1e-12):
    x = np.asarray(start, dtype=float).copy()
    fx = _fixed_point_residual(q, x)
    for _ in range(max_iter):
        if np.max(np.abs(fx)) <= target:
            return x, fx
        h = 1e-7 * np.maximum(1.0, np.abs(x))
        jac = np.empty((3, 3))
        for i in range(3):
            e = np.zeros(3)
            e[i] = h[i]
            jac[:, i] = (_fixed_point_residual(q, x + e) - _fixed_point_residual(q, x - e)) / (2 * h[i])
        try:
            step = np.linalg.solve(jac, -fx)
        except np.linalg.LinAlgError:
            return x, fx
        t = 1.0
        while t > 1e-6:
            trial = x + t * step
            ft = _fixed_point_residual(q, trial)
            if np.linalg.norm(ft) < np.linalg.norm(fx):
                break
            t /= 2
        x, fx = trial, ft
    return x, fx


def miquel_fixed_point(
    frame: ReferenceFrame,
    *,
    seed: int = 0,
    restarts: int = 20,
    tol: ToleranceContext = DEFAULT_TOL,
) -> HPoint:
    """Fixed point of ``D -> perspector(ABCD)`` by Newton iteration from ``G``.

    Solves ``d_A - d_B = 1/beta - 1/alpha`` and ``d_A - d_C = 1/gamma - 1/alpha``
    under the gauge ``d_A + d_B + d_C = 3``.
    """
    if not frame.regular:
        raise UnsupportedSignature("fixed point equations apply to regular planes")
    q = frame.S.q
    rng = np.random.default_rng(seed)
    start = np.ones(3)
    for attempt in range(restarts + 1):
        x, fx = _newton(q, start)
        # (3,0,0) and the other vertices solve the equations trivially
        if np.max(np.abs(fx)) <= 1e-10 and x[0] > 0 and np.min(np.abs(x)) > 1e-6:
            return HPoint(x, tol)
        start = np.ones(3) + rng.normal(scale=0.5, size=3)
    raise NoConvergence("Newton iteration failed for every restart")


def fixed_point_residuals(frame: ReferenceFrame, D) -> np.ndarray:
    d = _tetragon_coords(D)
    d = 3 * d / d.sum()
    return _fixed_point_residual(frame.S.q, d)[:2]


@dataclass(frozen=True)
class Theorem3Result:
    concyclic: bool
    on_diagonal: bool
    delta_sum: float
    diagonal_residual: float

    @property
    def consistent(self) -> bool:
        return self.concyclic == self.on_diagonal == (abs(self.delta_sum - 1) <= 1e-9)


def diagonal_line(scene: TetragonScene) -> np.ndarray:
    """Line through ``[0:d_B:d_C]`` and ``[d_A:d_B:0]``."""
    da, db, dc = scene.d
    return np.array([db * dc, -da * dc, da * db])


def theorem3_check(scene: TetragonScene, tol: ToleranceContext = DEFAULT_TOL, diagonal_tol: float = 1e-8) -> Theorem3Result:
    """Concyclicity of ``D`` against the two equivalent predicates.

    The designated Miquel point is ``Mq_ABCD`` (the middle member of the
    triangle); it lies on the diagonal line exactly when
    ``delta*(d_A+d_B+d_C) = 1``.
    """
    frame = scene.frame
    d = np.asarray(scene.d)
    concyclic = on_conic(frame.circum, d, tol)
    signed = scene.delta * d.sum()
    if concyclic and abs(signed + 1) <= 1e-7:
        raise MiquelPointAbsent("D lies on the circumcircle but B is off the circumcircle of ACD")
    mq = tetragon_miquel_triple(scene)[1]
    resid = abs(incidence(mq, diagonal_line(scene)))
    return Theorem3Result(bool(concyclic), bool(resid <= diagonal_tol), float(abs(signed)), float(resid))


# ---------------------------------------------------------------------------
# metric-affine planes


def affine_decompositions(l, m, n, k) -> dict[str, tuple[float, float, float]]:  # noqa: E741
    """Radical axes ``(p, q, r)`` of the circumcircles of ``AEF, BDF, CDE``."""
    k1, k2, k3 = k
    return {
        "AEF": (0.0, m * k3 / (l - m), n * k2 / (l - n)),
        "BDF": (l * k3 / (m - l), 0.0, n * k1 / (m - n)),
        "CDE": (l * k2 / (n - l), m * k1 / (n - m), 0.0),
    }


def affine_circles(l, m, n, frame: ReferenceFrame) -> dict[str, Conic]:  # noqa: E741
    out = {"ABC": frame.circum}
    for name, pqr in affine_decompositions(l, m, n, frame.k).items():
        out[name] = decomposed_conic(frame.k, pqr)
    return out


def miquel_affine_vector(l, m, n, k) -> np.ndarray:  # noqa: E741
    k1, k2, k3 = k
    return np.array([m * n / (m - n) * k1, n * l / (n - l) * k2, l * m / (l - m) * k3])


def miquel_point_affine(l, m, n, frame: ReferenceFrame, tol: ToleranceContext = DEFAULT_TOL) -> MiquelResult:  # noqa: E741
    """Common point of the four circumcircles in a metric-affine plane."""
    if frame.regular:
        raise UnsupportedSignature("affine closed form needs a metric-affine frame")
    l, m, n = float(l), float(m), float(n)  # noqa: E741
    _check_distinct(l, m, n, tol)
    if min(abs(l), abs(m), abs(n)) <= tol.eps * max(abs(l), abs(m), abs(n)):
        raise DegenerateScene("the fourth line passes through a vertex")
    v = miquel_affine_vector(l, m, n, frame.k)
    pt = HPoint(v, tol)
    c = canonical(v)
    at_inf = tol.is_zero(c.sum(), np.abs(c).sum())
    contact = Contact.TANGENTIAL_AT_INFINITY if at_inf else Contact.TRANSVERSAL
    # every finite point is congruent to every other in a metric-affine plane
    return MiquelResult(pt, contact, True)


