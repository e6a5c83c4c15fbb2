"""Homogeneous points, lines and conics over the complex numbers.

Everything here is scale-free: a point ``[v]`` is the class of ``v`` up to a
nonzero complex factor, and all comparisons go through a
:class:`ToleranceContext` so that near-zero quantities are judged relative to
the magnitude of the data that produced them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    CoincidentArguments,
    DegenerateQuadruple,
    IdenticalConics,
    NoDegenerateMemberFound,
    NotCoincident,
    SingularPair,
)


@dataclass(frozen=True)
class ToleranceContext:
    """Mixed relative/absolute comparison policy.

    Two scalars ``a`` and ``b`` are close when
    ``|a - b| <= abs_floor + eps * max(|a|, |b|)``.
    """

    eps: float = 1e-9
    abs_floor: float = 1e-12

    def __post_init__(self):
        if not (0 < self.abs_floor <= self.eps < 1):
            raise ValueError("need 0 < abs_floor <= eps < 1")

    def close(self, a, b) -> bool:
        a, b = complex(a), complex(b)
        return abs(a - b) <= self.abs_floor + self.eps * max(abs(a), abs(b))

    def is_zero(self, x, scale=1.0) -> bool:
        return abs(x) <= self.abs_floor + self.eps * abs(scale)


DEFAULT_TOL = ToleranceContext()

# relative window inside which two component magnitudes count as tied for pivot
_PIVOT_TIE = 1e-9


def chi(p) -> int:
    """Sign of a real 3-vector under the lexicographic order."""
    for x in np.asarray(p, dtype=float):
        if x > 0:
            return 1
        if x < 0:
            return -1
    return 0


def _raw(x) -> np.ndarray:
    v = getattr(x, "v", None)
    if v is None:
        v = getattr(x, "l", x)
    return np.asarray(v)


def _pivot(v: np.ndarray) -> int:
    mags = np.abs(v)
    return int(np.flatnonzero(mags >= mags.max() * (1 - _PIVOT_TIE))[0])


def _canon(v: np.ndarray, tol: ToleranceContext) -> np.ndarray:
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite homogeneous vector")
    if not np.any(v):
        raise ValueError("the zero vector has no projective class")
    p = _pivot(v)
    if np.iscomplexobj(v) and np.any(v.imag):
        w = v / v[p]
        w[p] = 1.0
        if np.any(np.abs(w.imag) > tol.eps):
            return w
        w = w.real.copy()
    else:
        # real arithmetic keeps the pivot division exact
        v = np.real(v).astype(float)
        w = v / v[p]
        w[p] = 1.0
    if chi(w) < 0:
        w = -w
    w[w == 0] = 0.0  # drop negative zeros so canonical text is stable
    return w


def canonical(v, tol: ToleranceContext = DEFAULT_TOL) -> np.ndarray:
    """Canonical representative of the projective class of ``v``.

    Real classes are returned as float arrays with largest magnitude 1 and
    nonnegative lexicographic sign.  Genuinely complex classes are divided by
    their largest-magnitude component, which then equals 1 exactly.
    """
    v = np.asarray(v)
    if v.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {v.shape}")
    return _canon(v, tol)


def proj_distance(u, v) -> float:
    """Largest componentwise gap after aligning ``v`` to canonical ``u``."""
    u = canonical(_raw(u)).astype(complex)
    v = np.asarray(_raw(v), dtype=complex)
    p = _pivot(u)
    if v[p] == 0:
        return float("inf")
    v = v * (u[p] / v[p])
    return float(np.max(np.abs(u - v)))


def proj_equal(u, v, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    """Mixed-tolerance equality of projective classes; any vector length."""
    u = _canon(np.asarray(_raw(u)), tol).astype(complex)
    v = np.asarray(_raw(v), dtype=complex)
    p = _pivot(u)
    if v[p] == 0:
        return False
    v = v * (u[p] / v[p])
    bound = tol.abs_floor + tol.eps * np.maximum(np.abs(u), np.abs(v))
    return bool(np.all(np.abs(u - v) <= bound))


class _Homogeneous:
    __slots__ = ("_v",)

    def __init__(self, v, tol: ToleranceContext = DEFAULT_TOL):
        w = canonical(_raw(v), tol)
        w.setflags(write=False)
        self._v = w

    @property
    def v(self) -> np.ndarray:
        return self._v

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self._v)

    def proj_equal(self, other, tol: ToleranceContext = DEFAULT_TOL) -> bool:
        return proj_equal(self._v, _raw(other), tol)

    def __iter__(self):
        return iter(self._v)

    def __repr__(self):
        comps = ":".join(f"{c:.6g}" for c in self._v)
        return f"{type(self).__name__}[{comps}]"


class HPoint(_Homogeneous):
    """A point ``[v]`` of the complex projective plane."""

    __slots__ = ()


class HLine(_Homogeneous):
    """A line given by the coefficients of its linear form."""

    __slots__ = ()

    @property
    def l(self) -> np.ndarray:  # noqa: E743
        return self._v


class Conic:
    """Zero set of a quadratic form ``v^T m v`` with ``m`` symmetric."""

    __slots__ = ("_m",)

    def __init__(self, m):
        m = np.asarray(getattr(m, "m", m))
        if m.shape != (3, 3):
            raise ValueError("conic matrix must be 3x3")
        if not np.all(np.isfinite(m)):
            raise ValueError("non-finite conic matrix")
        m = 0.5 * (m + m.T)
        if not np.any(m):
            raise ValueError("the zero form defines no conic")
        if np.iscomplexobj(m) and not np.any(m.imag):
            m = m.real
        m = m.copy()
        m.setflags(write=False)
        self._m = m

    @classmethod
    def from_coefficients(cls, xx=0, yy=0, zz=0, yz=0, zx=0, xy=0) -> "Conic":
        """Conic ``xx*x^2 + yy*y^2 + zz*z^2 + yz*y*z + zx*z*x + xy*x*y = 0``."""
        return cls([[xx, xy / 2, zx / 2], [xy / 2, yy, yz / 2], [zx / 2, yz / 2, zz]])

    @property
    def m(self) -> np.ndarray:
        return self._m

    @property
    def entries(self) -> np.ndarray:
        m = self._m
        return np.array([m[0, 0], m[1, 1], m[2, 2], m[1, 2], m[2, 0], m[0, 1]])

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self._m))

    def __call__(self, v):
        v = np.asarray(_raw(v))
        return v @ self._m @ v

    def bilinear(self, u, v):
        return np.asarray(_raw(u)) @ self._m @ np.asarray(_raw(v))

    def rank(self, tol: ToleranceContext = DEFAULT_TOL) -> int:
        s = np.linalg.svd(self._m, compute_uv=False)
        return int(np.sum(s > tol.eps * s[0]))

    def is_singular(self, tol: ToleranceContext = DEFAULT_TOL) -> bool:
        return self.rank(tol) < 3

    def proj_equal(self, other: "Conic", tol: ToleranceContext = DEFAULT_TOL) -> bool:
        return proj_equal(self.entries, other.entries, tol) if _nonzero6(self, other) else False

    def __repr__(self):
        return f"Conic({np.array2string(np.asarray(self._m), precision=6)})"


def _nonzero6(a: Conic, b: Conic) -> bool:
    return bool(np.any(a.entries)) and bool(np.any(b.entries))


def join(P, Q, tol: ToleranceContext = DEFAULT_TOL) -> HLine:
    """Line through two distinct points."""
    p, q = _raw(P), _raw(Q)
    if proj_equal(p, q, tol):
        raise CoincidentArguments("join of coincident points")
    return HLine(np.cross(p, q), tol)


def meet(L, M, tol: ToleranceContext = DEFAULT_TOL) -> HPoint:
    """Intersection point of two distinct lines."""
    a, b = _raw(L), _raw(M)
    if proj_equal(a, b, tol):
        raise CoincidentArguments("meet of coincident lines")
    return HPoint(np.cross(a, b), tol)


def incidence(P, L) -> complex:
    """``L . P`` on canonical representatives (a scale-free residual)."""
    return complex(canonical(_raw(L)) @ canonical(_raw(P)))


def det3(a, b, c) -> complex:
    return np.linalg.det(np.array([_raw(a), _raw(b), _raw(c)]))


def collinear(P, Q, R, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    vs = [canonical(_raw(x)) for x in (P, Q, R)]
    return tol.is_zero(det3(*vs), np.prod([np.linalg.norm(v) for v in vs]))


def conic_eval(C: Conic, P) -> complex:
    """Value of the form at the canonical representative of ``P``."""
    v = canonical(_raw(P))
    val = v @ C.m @ v
    return complex(val) if np.iscomplexobj(val) else float(val)


def on_conic(C: Conic, P, tol: ToleranceContext = DEFAULT_TOL) -> bool:
    v = canonical(_raw(P))
    return tol.is_zero(v @ C.m @ v, C.norm * float(np.vdot(v, v).real))


def polar(C: Conic, P, tol: ToleranceContext = DEFAULT_TOL) -> HLine:
    """Polar line of ``P``; for nonsingular ``C`` this inverts :func:`pole`."""
    v = canonical(_raw(P))
    w = C.m @ v
    if tol.is_zero(np.linalg.norm(w), C.norm * np.linalg.norm(v)):
        raise SingularPair("P lies in the kernel of the conic")
    return HLine(w, tol)


def pole(C: Conic, L, tol: ToleranceContext = DEFAULT_TOL) -> HPoint:
    if C.is_singular(tol):
        raise SingularPair("pole requires a nonsingular conic")
    return HPoint(np.linalg.solve(C.m, canonical(_raw(L))), tol)


# ---------------------------------------------------------------------------
# pencil-based conic intersection


class Intersection(NamedTuple):
    point: HPoint
    multiplicity: int
    real: bool


def solve_cubic(a, b, c, d) -> list[complex]:
    """All three complex roots of ``a x^3 + b x^2 + c x + d`` (``a != 0``).

    Cardano on the depressed cubic, followed by two Newton polishing steps
    on the original polynomial.
    """
    a, b, c, d = (complex(x) for x in (a, b, c, d))
    if a == 0:
        raise ValueError("leading coefficient must be nonzero")
    b, c, d = b / a, c / a, d / a
    shift = -b / 3
    p = c - b * b / 3
    q = 2 * b**3 / 27 - b * c / 3 + d
    disc = np.sqrt(q * q / 4 + p**3 / 27 + 0j)
    u3 = -q / 2 + disc
    if abs(-q / 2 - disc) > abs(u3):
        u3 = -q / 2 - disc
    if abs(u3) == 0:
        roots = [shift] * 3
    else:
        u = u3 ** (1 / 3)
        omega = complex(-0.5, np.sqrt(3) / 2)
        roots = []
        for k in range(3):
            uk = u * omega**k
            roots.append(uk - p / (3 * uk) + shift)

    def f(x):
        return ((x + b) * x + c) * x + d

    def df(x):
        return (3 * x + 2 * b) * x + c

    polished = []
    for r in roots:
        for _ in range(2):
            g = df(r)
            if g == 0:
                break
            step = f(r) / g
            if not np.isfinite(step):
                break
            r = r - step
        polished.append(complex(r))
    return polished


def _adjugate(m: np.ndarray) -> np.ndarray:
    adj = np.empty((3, 3), dtype=np.result_type(m, float))
    for i in range(3):
        for j in range(3):
            minor = np.delete(np.delete(m, j, axis=0), i, axis=1)
            adj[i, j] = (-1) ** (i + j) * (minor[0, 0] * minor[1, 1] - minor[0, 1] * minor[1, 0])
    return adj


def _line_basis(line: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two independent points spanning the line with coefficients ``line``."""
    _, _, vh = np.linalg.svd(np.asarray(line, dtype=complex).reshape(1, 3))
    return vh[1].conj(), vh[2].conj()


def line_conic_points(line, m: np.ndarray) -> list[np.ndarray]:
    """The two intersections (with multiplicity) of a line and a conic matrix."""
    p0, p1 = _line_basis(_raw(line))
    a = p0 @ m @ p0
    b = p0 @ m @ p1
    c = p1 @ m @ p1
    scale = np.linalg.norm(m)
    if max(abs(a), abs(b), abs(c)) <= 1e-13 * scale:
        raise SingularPair("line is a component of the conic")
    disc = np.sqrt(b * b - a * c + 0j)
    w = -b - disc if abs(-b - disc) >= abs(-b + disc) else -b + disc
    if abs(a) >= abs(c):
        # roots s of a s^2 + 2 b s + c = 0, point s*p0 + p1
        if w == 0:
            return [p1, p1]
        return [(w / a) * p0 + p1, (c / w) * p0 + p1]
    if w == 0:
        return [p0, p0]
    return [p0 + (w / c) * p1, p0 + (a / w) * p1]


def split_degenerate(m: np.ndarray, tol: ToleranceContext = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Factor a conic matrix of rank <= 2 into two line coefficient vectors."""
    m = np.asarray(m, dtype=complex)
    s = np.linalg.svd(m, compute_uv=False)
    if s[1] <= 1e-7 * s[0]:
        g = m[:, int(np.argmax(np.linalg.norm(m, axis=0)))]
        return g, g
    adj = _adjugate(m)
    vertex = adj[:, int(np.argmax(np.linalg.norm(adj, axis=0)))]
    probe = vertex.conj()
    u1, u2 = line_conic_points(probe, m)
    return np.cross(vertex, u1), np.cross(vertex, u2)


def degenerate_member(m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    """A rank <= 2 member ``m2 + t*m1`` of the pencil (``m1`` nonsingular)."""
    m1 = m1 / np.linalg.norm(m1)
    m2 = m2 / np.linalg.norm(m2)
    det = np.linalg.det
    c0 = det(m2)
    c3 = det(m1)
    fp = det(m2 + m1)
    fm = det(m2 - m1)
    c2 = (fp + fm) / 2 - c0
    c1 = (fp - fm) / 2 - c3
    best, best_ratio = None, np.inf
    for t in solve_cubic(c3, c2, c1, c0):
        cand = m2 + t * m1
        s = np.linalg.svd(cand, compute_uv=False)
        ratio = s[2] / s[0] if s[0] > 0 else np.inf
        if ratio < best_ratio:
            best, best_ratio = cand, ratio
    if best is None or best_ratio > 1e-6:
        raise NoDegenerateMemberFound(f"best sigma3/sigma1 = {best_ratio:.3g}")
    return best


def conic_intersections(C1: Conic, C2: Conic, tol: ToleranceContext = DEFAULT_TOL) -> list[Intersection]:
    """The four intersections of two conics over C, merged with multiplicity."""
    if C1.proj_equal(C2, tol):
        raise IdenticalConics("the two conics coincide")
    base, other = C1, C2
    if base.is_singular(tol):
        base, other = other, base
        if base.is_singular(tol):
            raise SingularPair("at least one conic must be nonsingular")
    member = degenerate_member(np.asarray(base.m, complex), np.asarray(other.m, complex))
    pts = []
    for line in split_degenerate(member, tol):
        pts.extend(line_conic_points(line, np.asarray(base.m, complex)))
    merged: list[list] = []
    cluster_tol = ToleranceContext(eps=1e-6, abs_floor=1e-9)
    for p in pts:
        for entry in merged:
            if proj_equal(entry[0], p, cluster_tol):
                entry[1] += 1
                break
        else:
            merged.append([p, 1])
    out = []
    for p, mult in merged:
        hp = HPoint(p, tol)
        out.append(Intersection(hp, mult, hp.is_real))
    return out


# ---------------------------------------------------------------------------
# cross ratio


def cross_ratio(a, b, c, d, tol: ToleranceContext = DEFAULT_TOL) -> complex:
    """Cross ratio ``(a,b;c,d) = (ta-tc)(tb-td) / ((ta-td)(tb-tc))``.

    Accepts four collinear points or four concurrent lines; both cases share
    the same determinant formula relative to an auxiliary element not
    incident with the common carrier.
    """
    vs = [canonical(_raw(x), tol).astype(complex) for x in (a, b, c, d)]
    if proj_equal(vs[0], vs[1], tol) or proj_equal(vs[2], vs[3], tol):
        raise DegenerateQuadruple("(a,b) and (c,d) must be distinct pairs")
    carrier = np.cross(vs[0], vs[1])
    carrier = carrier / np.linalg.norm(carrier)
    for v in vs[2:]:
        if not tol.is_zero(carrier @ v, np.linalg.norm(v)):
            raise NotCoincident("elements do not share a common carrier")
    aux = carrier.conj()
    num = det3(aux, vs[0], vs[2]) * det3(aux, vs[1], vs[3])
    den = det3(aux, vs[0], vs[3]) * det3(aux, vs[1], vs[2])
    if den == 0:
        return complex(np.inf)
    return complex(num / den)


def real_points_only(points: Sequence[Intersection]) -> list[HPoint]:
    return [p.point for p in points if p.real]
