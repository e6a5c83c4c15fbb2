"""SVG figures of scenarios.

A chart is a projective map ``v -> M v`` followed by dehomogenization.  The
barycentric chart sends ``A, B, C`` to an equilateral triangle in the affine
chart ``x+y+z=1``; the disk chart sends the absolute conic of a hyperbolic
plane to the unit circle.  Conics are traced through the pencil of lines at
one of their real points, so every sample is exact up to rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional
from xml.sax.saxutils import escape

import numpy as np

from ..cayley_klein import Kind
from ..circles import ReferenceFrame, circumcircle_through
from ..errors import GeometryError, UnboundedElement
from ..miquel import (
    circumcircles,
    miquel_point_affine,
    miquel_point_of_lines,
    miquel_point_regular,
    perspector,
    quadrilateral_scene,
    quadrilateral_vertices,
    radical_lines,
    tetragon_miquel_triple,
    tetragon_scene,
)
from .scenario import Scenario

CANVAS = 800
SAMPLES = 256
PAD = 0.15

_STYLE = """
.conic { fill: none; stroke: #1f4e99; stroke-width: 1.5; }
.conic.absolute { stroke: #8ecae6; stroke-width: 3; }
.line { stroke: #888888; stroke-width: 1; }
.line.radical { stroke: #c0392b; stroke-dasharray: 4 3; }
.line.perspective { stroke: #27ae60; }
.vertex { fill: #222222; }
.mq { fill: #e67e22; stroke: #222222; }
.perspector { fill: #27ae60; stroke: #222222; }
text { font-family: sans-serif; font-size: 13px; }
"""


@dataclass(frozen=True)
class Chart:
    name: str
    M: np.ndarray

    def image(self, v) -> Optional[np.ndarray]:
        h = self.M @ np.real(np.asarray(getattr(v, "v", v), dtype=complex))
        scale = np.abs(h).max()
        if scale == 0 or abs(h[2]) <= 1e-9 * scale:
            return None
        return h[:2] / h[2]

    def line(self, L) -> np.ndarray:
        """Line coefficients ``(a, b, c)`` of ``a x + b y + c = 0`` in the chart."""
        return np.real(np.asarray(getattr(L, "l", L), dtype=complex)) @ np.linalg.inv(self.M)


def barycentric_chart() -> Chart:
    s = math.sqrt(3) / 2
    return Chart("barycentric", np.array([[0.0, 1.0, 0.5], [0.0, 0.0, s], [1.0, 1.0, 1.0]]))


def disk_chart(phi: np.ndarray) -> Chart:
    """Chart in which ``phi = X^2 + Y^2 - W^2``; needs signature (2,1) or (1,2)."""
    lam, U = np.linalg.eigh(np.asarray(phi, dtype=float))
    neg = lam < 0
    if neg.sum() == 2:
        lam, neg = -lam, ~neg
    if neg.sum() != 1:
        raise UnboundedElement("the absolute conic has no real points")
    order = list(np.flatnonzero(~neg)) + list(np.flatnonzero(neg))
    M = (np.sqrt(np.abs(lam[order]))[:, None]) * U[:, order].T
    return Chart("disk", M)


def real_point(m: np.ndarray) -> np.ndarray:
    """Some real point of a nondegenerate real conic."""
    lam, U = np.linalg.eigh(m)
    if lam.min() * lam.max() >= 0:
        raise UnboundedElement("conic has no real points")
    i, j = int(np.argmax(lam)), int(np.argmin(lam))
    return math.sqrt(-lam[j]) * U[:, i] + math.sqrt(lam[i]) * U[:, j]


def trace_conic(m: np.ndarray, start: Optional[np.ndarray] = None, samples: int = SAMPLES) -> list[np.ndarray]:
    """Homogeneous samples along the conic, following the pencil of lines at ``start``."""
    X = np.asarray(start if start is not None else real_point(m), dtype=float)
    X = X / np.linalg.norm(X)
    _, _, vt = np.linalg.svd(X[None, :])
    U, V = vt[1], vt[2]
    out = []
    for t in np.linspace(0.0, math.pi, samples, endpoint=False):
        W = math.cos(t) * U + math.sin(t) * V
        out.append((W @ m @ W) * X - 2 * (X @ m @ W) * W)
    out.append(out[0])
    return out


@dataclass
class Figure:
    chart: Chart
    conics: list = field(default_factory=list)  # (css class, label, homogeneous samples)
    lines: list = field(default_factory=list)  # (css class, line vector)
    points: list = field(default_factory=list)  # (css class, label, vector)
    skipped: list = field(default_factory=list)

    def add_conic(self, cls, label, m, start=None):
        try:
            self.conics.append((cls, label, trace_conic(np.asarray(m, dtype=float), start)))
        except UnboundedElement as exc:
            self.skipped.append(f"{label}: {exc}")

    def add_point(self, cls, label, v):
        if self.chart.image(v) is None:
            self.skipped.append(f"{label}: not in the chart")
        else:
            self.points.append((cls, label, v))

    # -- rendering ----------------------------------------------------------

    def _bounds(self):
        pts = [self.chart.image(v) for _, _, v in self.points]
        pts = [p for p in pts if p is not None]
        if self.chart.name == "disk":
            pts += [np.array([-1.0, -1.0]), np.array([1.0, 1.0])]
        if not pts:
            pts = [np.zeros(2), np.ones(2)]
        arr = np.array(pts)
        lo, hi = arr.min(axis=0), arr.max(axis=0)
        span = max(float((hi - lo).max()), 1e-6)
        mid = (lo + hi) / 2
        half = span * (0.5 + PAD)
        return mid - half, mid + half

    def to_svg(self) -> str:
        lo, hi = self._bounds()
        k = CANVAS / float((hi - lo).max())

        def xy(p):
            return (p[0] - lo[0]) * k, CANVAS - (p[1] - lo[1]) * k

        far = 3 * (hi - lo).max()
        mid = (lo + hi) / 2
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{CANVAS}" height="{CANVAS}" '
            f'viewBox="0 0 {CANVAS} {CANVAS}">',
            f"<title>{escape(self.chart.name)} chart</title>",
            f"<style>{_STYLE}</style>",
        ]
        for cls, L in self.lines:
            seg = _clip_line(self.chart.line(L), lo, hi)
            if seg is None:
                continue
            (x1, y1), (x2, y2) = xy(seg[0]), xy(seg[1])
            out.append(f'<path class="line {cls}" d="M {x1:.3f} {y1:.3f} L {x2:.3f} {y2:.3f}"/>')
        for cls, label, samples in self.conics:
            d, pen = [], "M"
            for v in samples:
                p = self.chart.image(v)
                if p is None or np.abs(p - mid).max() > far:
                    pen = "M"
                    continue
                x, y = xy(p)
                d.append(f"{pen} {x:.3f} {y:.3f}")
                pen = "L"
            if d:
                out.append(f'<path class="conic {cls}" data-label="{escape(label)}" d="{" ".join(d)}"/>')
        for cls, label, v in self.points:
            x, y = xy(self.chart.image(v))
            r = 5 if cls == "vertex" else 6
            out.append(f'<circle class="{cls}" cx="{x:.3f}" cy="{y:.3f}" r="{r}"/>')
            out.append(f'<text x="{x + 7:.3f}" y="{y - 7:.3f}">{escape(label)}</text>')
        for note in self.skipped:
            out.append(f"<!-- skipped {escape(note)} -->")
        out.append("</svg>")
        return "\n".join(out) + "\n"


def _clip_line(abc, lo, hi):
    a, b, c = abc
    pts = []
    for x in (lo[0], hi[0]):
        if abs(b) > 1e-15:
            y = -(a * x + c) / b
            if lo[1] <= y <= hi[1]:
                pts.append((x, y))
    for y in (lo[1], hi[1]):
        if abs(a) > 1e-15:
            x = -(b * y + c) / a
            if lo[0] <= x <= hi[0]:
                pts.append((x, y))
    if len(pts) < 2:
        return None
    pts.sort()
    return np.array(pts[0]), np.array(pts[-1])


# ---------------------------------------------------------------------------


def _pick_chart(frame: ReferenceFrame, chart: Optional[str]) -> Chart:
    if chart in (None, "auto"):
        chart = "disk" if frame.kind is Kind.HYPERBOLIC else "barycentric"
    if chart == "barycentric":
        return barycentric_chart()
    if chart == "disk":
        if frame.kind is not Kind.HYPERBOLIC:
            raise ValueError("the disk chart needs a hyperbolic plane")
        return disk_chart(frame.S.phi.m)
    raise ValueError(f"unknown chart {chart!r}")


def build_figure(sc: Scenario, chart: Optional[str] = None) -> Figure:
    frame = sc.frame()
    fig = Figure(_pick_chart(frame, chart))
    if frame.regular:
        fig.add_conic("absolute", "absolute", frame.S.phi.m)
    eye = np.eye(3)
    names = "ABC"
    for i in range(3):
        fig.lines.append(("side", np.cross(eye[i], eye[(i + 1) % 3])))
    if sc.scene_type == "quadrilateral":
        l, m, n = sc.scene_vector  # noqa: E741
        fig.lines.append(("side", np.array([l, m, n])))
        verts = dict(zip("ABCDEF", (*eye, np.array([0, n, -m]), np.array([n, 0, -l]), np.array([m, -l, 0]))))
        if frame.regular:
            scene = quadrilateral_scene(frame, l, m, n)
            for name, circ in circumcircles(scene).items():
                fig.add_conic("circle", name, circ.conic.m, verts[name[0]])
            for L in radical_lines(scene).values():
                fig.lines.append(("radical", L.l))
            mq = miquel_point_regular(scene).point
        else:
            for name in ("ABC", "AEF", "CDE", "BDF"):
                circ = circumcircle_through(*(verts[c] for c in name), frame)
                fig.add_conic("circle", name, circ.conic.m, verts[name[0]])
            mq = miquel_point_affine(l, m, n, frame).point
        for name, v in verts.items():
            fig.add_point("vertex", name, v)
        fig.add_point("mq", "Mq", mq)
    elif sc.scene_type == "tetragon":
        tet = tetragon_scene(frame, sc.scene_vector)
        fig.add_conic("circle", "ABC", frame.circum.m, eye[0])
        for name, v in zip("ABCD", (*eye, tet.D.v)):
            fig.add_point("vertex", name, v)
        for i, P in enumerate((tet.P1, tet.P2, tet.P3), 1):
            fig.add_point("vertex", f"P{i}", P.v)
        for name, e, M in zip(names, eye, tetragon_miquel_triple(tet)):
            fig.add_point("mq", f"Mq_{name}", M.v)
            fig.lines.append(("perspective", np.cross(e, M.v)))
        fig.add_point("perspector", "Q", perspector(tet).v)
    else:
        lines = list(sc.scene_vector)
        fig.lines = [("side", L) for L in lines]
        verts = quadrilateral_vertices(lines)
        for (i, j), P in verts.items():
            fig.add_point("vertex", f"{i}{j}", P.v)
        for omit in range(4):
            idx = [(i, j) for (i, j) in verts if omit not in (i, j)]
            try:
                circ = circumcircle_through(*(verts[p] for p in idx), frame)
            except GeometryError as exc:
                fig.skipped.append(f"circle without line {omit}: {exc}")
                continue
            fig.add_conic("circle", f"omit{omit}", circ.conic.m, verts[idx[0]].v)
        fig.add_point("mq", "Mq", miquel_point_of_lines(lines, frame).v)
    return fig


def emit_svg(sc: Scenario, chart: Optional[str] = None) -> str:
    return build_figure(sc, chart).to_svg()
