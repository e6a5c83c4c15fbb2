"""Verification suites: closed forms against independent oracles on random scenes.

Each trial draws from its own stream ``default_rng([seed, trial])`` and
returns a :class:`TrialOutcome`.  Reports list failures in trial order, then
one summary record; wall time is kept out of the report body so that equal
``(suite, trials, seed)`` give byte-identical output.
"""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..cayley_klein import Kind, midpoints, normalize_point
from ..circles import (
    circle_decomposition,
    circular_points,
    circumcircle_through,
    frame_from_lemoine,
    frame_regular,
)
from ..errors import GeometryError, UnknownSuite
from ..miquel import (
    affine_circles,
    fixed_point_residuals,
    miquel_fixed_point,
    miquel_point_affine,
    miquel_point_of_lines,
    miquel_point_radical,
    miquel_point_regular,
    miquel_transformation,
    perspector,
    quadrilateral_scene,
    radical_lines,
    tetragon_miquel_triple,
    tetragon_quadrilaterals,
    tetragon_scene,
    theorem3_check,
)
from ..projective import HPoint, canonical, conic_eval, incidence, join, meet, polar, proj_distance
from ..quadsets import bisector_lemma_values, inscribed_cross_ratios, triangle_cross_ratios
from . import generate as gen
from .scenario import fmt, quadrilateral_scenario, tetragon_scenario

REGULAR = ("elliptic", "hyperbolic")
AFFINE = ("euclidean", "minkowski", "galilean")
NON_GALILEAN = ("euclidean", "minkowski")

PROJ_TOL = 1e-8
AFFINE_TOL = 1e-9
FIXED_TOL = 1e-10
FIXED_SELF_TOL = 1e-7
# q range on which the nontrivial fixed point stays inside the open tetragon region
FIXED_Q_RANGE = 0.2


@dataclass
class TrialOutcome:
    ok: bool
    residual: float
    kind: str
    inputs: dict
    detail: str = ""
    extra: dict = field(default_factory=dict)


def _pt(v) -> list:
    return [fmt(x) for x in np.real(canonical(np.asarray(getattr(v, "v", v))))]


def _conic_residual(C, P) -> float:
    v = canonical(np.asarray(getattr(P, "v", P)))
    return float(abs(conic_eval(C, v)) / (C.norm * float(np.vdot(v, v).real)))


def _guard(fn: Callable, kind: str, inputs: dict) -> TrialOutcome:
    try:
        return fn()
    except GeometryError as exc:
        return TrialOutcome(False, float("inf"), kind, inputs, f"{type(exc).__name__}: {exc}")


# ---------------------------------------------------------------------------


def trial_thm1(rng, idx):
    kind = REGULAR[idx % 2]
    q, lmn = gen.sample_regular_quadrilateral(rng, kind)
    inputs = quadrilateral_scenario(kind, "q", q, lmn).to_dict()

    def run():
        scene = quadrilateral_scene(frame_regular(*q), *lmn)
        closed = miquel_point_regular(scene).point
        radical = miquel_point_radical(scene)
        res = proj_distance(closed, radical)
        for L in radical_lines(scene).values():
            res = max(res, abs(incidence(closed, L)))
        return TrialOutcome(res <= PROJ_TOL, float(res), kind, inputs)

    return _guard(run, kind, inputs)


def trial_thm2(rng, idx):
    kind = REGULAR[idx % 2]
    q, d = gen.sample_tetragon(rng, kind)
    inputs = tetragon_scenario(kind, q, d).to_dict()

    def run():
        fr = frame_regular(*q)
        sc = tetragon_scene(fr, d)
        triple = tetragon_miquel_triple(sc)
        Q = perspector(sc)
        lines = [join(e, m) for e, m in zip(np.eye(3), triple)]
        res = proj_distance(meet(lines[0], lines[1]), Q)
        res = max(res, abs(incidence(Q, lines[2])))
        # each member of the triple against the generic four-line construction
        quads = tetragon_quadrilaterals(sc)
        for name, mq in zip(("ABDC", "ABCD", "ADBC"), triple):
            res = max(res, proj_distance(miquel_point_of_lines(quads[name], fr), mq))
        return TrialOutcome(res <= PROJ_TOL, float(res), kind, inputs)

    return _guard(run, kind, inputs)


def trial_thm3(rng, idx):
    kind = REGULAR[idx % 2]
    concyclic = (idx // 2) % 2 == 0
    sampler = gen.sample_concyclic_tetragon if concyclic else gen.sample_tetragon
    q, d = sampler(rng, kind)
    inputs = tetragon_scenario(kind, q, d).to_dict()

    def run():
        r = theorem3_check(tetragon_scene(frame_regular(*q), d))
        gap = abs(r.delta_sum - 1)
        extra = {"concyclic_sample": concyclic}
        if concyclic:
            ok = r.concyclic and r.on_diagonal and gap <= 1e-9
            res = max(gap, r.diagonal_residual)
        else:
            ok = not r.concyclic and not r.on_diagonal and gap > 1e-9
            res = 0.0
        return TrialOutcome(ok, float(res), kind, inputs, "" if ok else repr(r), extra)

    return _guard(run, kind, inputs)


def trial_affine(rng, idx):
    kind = AFFINE[idx % 3]
    k, lmn = gen.sample_affine_quadrilateral(rng, kind)
    inputs = quadrilateral_scenario(kind, "k", k, lmn).to_dict()

    def run():
        fr = frame_from_lemoine(k)
        l, m, n = lmn  # noqa: E741
        mq = miquel_point_affine(l, m, n, fr).point
        verts = {"A": np.eye(3)[0], "B": np.eye(3)[1], "C": np.eye(3)[2],
                 "D": np.array([0, n, -m]), "E": np.array([n, 0, -l]), "F": np.array([m, -l, 0])}
        res = 0.0
        for name, C in affine_circles(l, m, n, fr).items():
            # the closed-form circle must also pass through its defining vertices
            for v in name:
                res = max(res, _conic_residual(C, verts[v]))
            res = max(res, _conic_residual(C, mq))
        for name in ("AEF", "BDF", "CDE"):
            direct = circumcircle_through(*(verts[v] for v in name), fr).conic
            res = max(res, _conic_residual(direct, mq))
        return TrialOutcome(res <= AFFINE_TOL, float(res), kind, inputs)

    return _guard(run, kind, inputs)


def trial_lemma(rng, idx):
    kind = NON_GALILEAN[idx % 2]
    k, lmn = gen.sample_affine_quadrilateral(rng, kind, finite_mq=True)
    inputs = quadrilateral_scenario(kind, "k", k, lmn).to_dict()
    fake = []
    for _ in range(6):
        a, b = rng.normal(size=2)
        fake.append(np.array([a, b, -a - b]))

    def run():
        fr = frame_from_lemoine(k)
        good = bisector_lemma_values(*lmn, fr)
        res = max(max(r) for r in good.relative_tau)
        try:
            control = bisector_lemma_values(*lmn, fr, tilde=fake).holds
        except AssertionError:
            control = False
        return TrialOutcome(good.holds, float(res), kind, inputs, extra={"control_rejected": not control})

    return _guard(run, kind, inputs)


def _finite_point(rng) -> np.ndarray:
    while True:
        p = rng.normal(size=3)
        if abs(p.sum()) > 0.3 * np.abs(p).sum():
            return p / p.sum()


def _second_point(C, X, W) -> np.ndarray:
    """Other intersection of the conic with the line through ``X`` and ``W``."""
    m = C.m
    return (W @ m @ W) * X - 2 * (X @ m @ W) * W


def trial_inscribed(rng, idx):
    kind = NON_GALILEAN[idx % 2]
    k = gen.sample_k(rng, kind)
    X, Y, Z = (_finite_point(rng) for _ in range(3))
    Ws = [_finite_point(rng) for _ in range(4)]
    inputs = {"kind": kind, "k": _pt(k), "triangle": [_pt(p) for p in (X, Y, Z)], "directions": [_pt(w) for w in Ws]}

    def run():
        fr = frame_from_lemoine(k)
        C = circumcircle_through(X, Y, Z, fr).conic
        P, Q, R1, R2 = (_second_point(C, X, W) for W in Ws)
        k1, k2 = inscribed_cross_ratios(C, P, Q, R1, R2, fr)
        scale = max(abs(k1), abs(k2), 1.0)
        branch = min(abs(k1 - k2), abs(k1 * k2 - 1)) / scale
        prod = np.prod(triangle_cross_ratios(X, Y, Z, fr))
        res = max(branch, abs(prod - 1))
        return TrialOutcome(res <= PROJ_TOL, float(res), kind, inputs,
                            extra={"branch": "equal" if abs(k1 - k2) <= abs(k1 * k2 - 1) else "inverse"})

    return _guard(run, kind, inputs)


def trial_fixedpoint(rng, idx):
    q = rng.uniform(-FIXED_Q_RANGE, FIXED_Q_RANGE, size=3)
    fr = frame_regular(*q)
    kind = fr.kind.value
    inputs = {"kind": kind, "q": [fmt(x) for x in q]}

    def run():
        D = miquel_fixed_point(fr, seed=idx)
        eq = float(np.max(np.abs(fixed_point_residuals(fr, D))))
        self_map = proj_distance(miquel_transformation(fr, D), D)
        ok = eq <= FIXED_TOL and self_map <= FIXED_SELF_TOL
        return TrialOutcome(ok, max(eq, self_map), kind, inputs, extra={"D": _pt(D)})

    return _guard(run, kind, inputs)


def trial_fundamentals(rng, idx):
    """Normalization, midpoints, circumcircles, polar of O, circular points."""
    rkind = REGULAR[idx % 2]
    akind = AFFINE[idx % 3]
    q = gen.sample_q(rng, rkind)
    k = gen.sample_k(rng, akind)
    pts = rng.normal(size=(3, 3))
    apts = [_finite_point(rng) for _ in range(3)]
    inputs = {"regular": rkind, "q": [fmt(x) for x in q], "affine": akind, "k": [fmt(x) for x in k],
              "points": [_pt(p) for p in pts], "affine_points": [_pt(p) for p in apts]}

    def run():
        fr = frame_regular(*q)
        S = fr.S
        res = 0.0
        # idempotent normalization
        normed = [normalize_point(p, S) for p in pts]
        for P in normed:
            res = max(res, float(np.max(np.abs(normalize_point(P.v, S).v - P.v))))
        # midpoints: the bilinear form against each endpoint agrees
        same = [P for P in normed if P.sign_class == normed[0].sign_class]
        if len(same) >= 2:
            P, Q = same[0], same[1]
            mids = midpoints(P, Q, S)
            for M in (mids.m_plus, mids.m_minus):
                m = M.v
                a, b = S.bilinear(m, P.v), S.bilinear(m, Q.v)
                if M is mids.m_minus:
                    b = -b
                res = max(res, abs(a - b) / (np.linalg.norm(m) * np.linalg.norm(S.phi.m)))
        # circumcircle through its vertices (congruent triple needed)
        if len(same) == 3:
            circ = circumcircle_through(*same, fr).conic
            res = max(res, *(_conic_residual(circ, P.v) for P in same))
        # polar of O: the tripolar (1,1,1) of G, both for the circumcircle and the absolute form
        for C in (fr.circum, S.phi):
            res = max(res, proj_distance(polar(C, fr.O), np.ones(3)))
        # singular case: every circle passes through both circular points
        fa = frame_from_lemoine(k)
        circ = circumcircle_through(*apts, fa).conic
        for P in apts:
            res = max(res, _conic_residual(circ, P))
        I, J = circular_points(fa)
        for X in (I, J):
            res = max(res, _conic_residual(circ, X.v))
        circle_decomposition(circ, fa)
        ran = {"midpoints_checked": len(same) >= 2, "circumcircle_checked": len(same) == 3}
        return TrialOutcome(res <= PROJ_TOL, float(res), f"{rkind}+{akind}", inputs, extra=ran)

    return _guard(run, f"{rkind}+{akind}", inputs)


SUITES: dict[str, Callable] = {
    "thm1": trial_thm1,
    "thm2": trial_thm2,
    "thm3": trial_thm3,
    "affine": trial_affine,
    "lemma": trial_lemma,
    "inscribed": trial_inscribed,
    "fixedpoint": trial_fixedpoint,
    "fundamentals": trial_fundamentals,
}


def run_trial(name: str, seed: int, idx: int) -> TrialOutcome:
    if name not in SUITES:
        raise UnknownSuite(name)
    return SUITES[name](gen.trial_rng(seed, idx), idx)


def _run_chunk(args):
    name, seed, indices = args
    return [(i, run_trial(name, seed, i)) for i in indices]


@dataclass
class SuiteReport:
    suite: str
    trials: int
    seed: int
    outcomes: list
    wall_time: float = 0.0

    @property
    def failures(self) -> list[tuple[int, TrialOutcome]]:
        return [(i, o) for i, o in enumerate(self.outcomes) if not o.ok]

    @property
    def max_residual(self) -> float:
        finite = [o.residual for o in self.outcomes if np.isfinite(o.residual)]
        return max(finite, default=0.0)

    @property
    def passed(self) -> bool:
        return not self.failures

    def kind_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for o in self.outcomes:
            out[o.kind] = out.get(o.kind, 0) + 1
        return dict(sorted(out.items()))

    def extra_counts(self) -> dict[str, dict]:
        """Tally of boolean and string extras across trials."""
        out: dict[str, dict] = {}
        for o in self.outcomes:
            for key, val in o.extra.items():
                if isinstance(val, (bool, str)):
                    slot = out.setdefault(key, {})
                    slot[str(val).lower()] = slot.get(str(val).lower(), 0) + 1
        return {k: dict(sorted(v.items())) for k, v in sorted(out.items())}

    def records(self) -> list[dict]:
        recs = []
        for i, o in self.failures:
            recs.append({
                "record": "failure", "suite": self.suite, "seed": self.seed, "trial": i,
                "kind": o.kind, "residual": _num(o.residual), "detail": o.detail, "scenario": o.inputs,
            })
        recs.append({
            "record": "summary", "suite": self.suite, "seed": self.seed, "trials": self.trials,
            "failures": len(self.failures), "max_residual": _num(self.max_residual),
            "kinds": self.kind_counts(), "tallies": self.extra_counts(),
        })
        return recs

    def body(self) -> str:
        return "".join(json.dumps(r, sort_keys=False) + "\n" for r in self.records())


def _num(x: float) -> str:
    return fmt(x) if np.isfinite(x) else "inf"


def run_suite(name: str, trials: int, seed: int, jobs: int = 1) -> SuiteReport:
    if name not in SUITES:
        raise UnknownSuite(name)
    if trials < 0:
        raise ValueError("trials must be nonnegative")
    start = time.perf_counter()
    if jobs <= 1 or trials < 2:
        outcomes = [run_trial(name, seed, i) for i in range(trials)]
    else:
        chunks = [(name, seed, list(range(j, trials, jobs))) for j in range(jobs)]
        merged: dict[int, TrialOutcome] = {}
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_run_chunk, chunks):
                merged.update(part)
        outcomes = [merged[i] for i in range(trials)]
    return SuiteReport(name, trials, seed, outcomes, time.perf_counter() - start)


def rerun_failure(record: dict) -> Optional[TrialOutcome]:
    """Re-run the trial named by a failure record."""
    return run_trial(record["suite"], record["seed"], record["trial"])
