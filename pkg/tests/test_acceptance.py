"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""
import json
import os
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from ckm.circles import frame_from_lemoine, frame_regular
from ckm.harness.figure import emit_svg
from ckm.harness.generate import random_scene
from ckm.harness.scenario import emit_scenario, parse_scenario, quadrilateral_scenario
from ckm.harness.suites import run_suite
from ckm.miquel import (
    affine_circles,
    miquel_fixed_point,
    miquel_point_affine,
    miquel_point_pencil,
    miquel_point_radical,
    miquel_point_regular,
    perspector,
    quadrilateral_scene,
    tetragon_scene,
    theorem3_check,
)
from ckm.projective import canonical, conic_eval

SEED = 20261017
JOBS = max(1, min(4, os.cpu_count() or 1))
RESULTS: dict[int, str] = {}


def _record(n, title, ok, detail):
    line = f"criterion {n:>2} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    RESULTS[n] = line
    print(line)
    assert ok, line


def _summary(rep):
    return json.loads(rep.body().splitlines()[-1])


def test_criterion_01_closed_form_vs_radical_lines():
    rep = run_suite("thm1", 2000, SEED, jobs=JOBS)
    s = _summary(rep)
    kinds = s["kinds"]
    ok = rep.passed and rep.max_residual <= 1e-8 and kinds.get("elliptic", 0) >= 1000 \
        and kinds.get("hyperbolic", 0) >= 1000
    _record(1, "closed form = radical meet, six radical lines through Mq", ok,
            f"{s['failures']} failures, max residual {s['max_residual']}, kinds {kinds}")


def test_criterion_02_anchor():
    scene = quadrilateral_scene(frame_regular(0, 0, 0), 1, 1, 1)
    three = {
        "closed": miquel_point_regular(scene).point,
        "radical": miquel_point_radical(scene),
        "conic pencil": miquel_point_pencil(scene),
    }
    ok = all(P.proj_equal([-1, 1, -1]) for P in three.values())
    _record(2, "q=0, l=m=n=1 gives Mq = [-1:1:-1] three ways", ok,
            ", ".join(f"{k} {canonical(P.v).tolist()}" for k, P in three.items()))


def test_criterion_03_affine():
    fr = frame_from_lemoine((1, 1, 1))
    mq = miquel_point_affine(1, 2, 3, fr).point
    v = np.array([-12.0, 3.0, -4.0])
    anchor = mq.proj_equal(v) and all(
        abs(conic_eval(C, v)) <= 1e-12 * C.norm * (v @ v) for C in affine_circles(1, 2, 3, fr).values())
    rep = run_suite("affine", 3000, SEED, jobs=JOBS)
    s = _summary(rep)
    kinds = s["kinds"]
    ok = anchor and rep.passed and rep.max_residual <= 1e-9 \
        and all(kinds.get(k, 0) >= 1000 for k in ("euclidean", "minkowski", "galilean"))
    _record(3, "affine Mq on all four circles", ok,
            f"anchor (-12:3:-4) {'ok' if anchor else 'wrong'}, {s['failures']} failures, "
            f"max residual {s['max_residual']}, kinds {kinds}")


def test_criterion_04_perspector():
    rep = run_suite("thm2", 1000, SEED, jobs=JOBS)
    s = _summary(rep)
    Q = canonical(perspector(tetragon_scene(frame_regular(0, 0, 0), [1, 1, 1])).v)
    anchor = np.array_equal(Q, [1.0, 1.0, 1.0])
    ok = anchor and rep.passed and rep.max_residual <= 1e-8 and s["trials"] >= 500
    _record(4, "perspective lines concurrent at the closed-form perspector", ok,
            f"{s['failures']} failures, max residual {s['max_residual']}, anchor Q = {Q.tolist()}")


def test_criterion_05_concyclic_biconditional():
    rep = run_suite("thm3", 1000, SEED, jobs=JOBS)
    s = _summary(rep)
    split = s["tallies"]["concyclic_sample"]
    r = theorem3_check(tetragon_scene(frame_regular(0, 0, 0), [2, 2, -1]))
    anchor = r.concyclic and r.on_diagonal and abs(r.delta_sum - 1) <= 1e-12
    ok = anchor and rep.passed and split.get("true", 0) >= 500 and split.get("false", 0) >= 500
    _record(5, "concyclic iff designated Miquel point on the diagonal", ok,
            f"{s['failures']} failures, concyclic/generic {split.get('true', 0)}/{split.get('false', 0)}, "
            f"max residual {s['max_residual']}, anchor delta_sum {r.delta_sum:.15g}")


def test_criterion_06_fixed_point():
    G = miquel_fixed_point(frame_regular(0, 0, 0))
    anchor = G.proj_equal([1, 1, 1])
    rep = run_suite("fixedpoint", 200, SEED, jobs=JOBS)
    s = _summary(rep)
    ok = anchor and rep.passed and s["trials"] >= 100
    _record(6, "Newton fixed point of the Miquel transformation", ok,
            f"q=0 gives {canonical(G.v).tolist()}, {s['failures']} failures over {s['trials']} planes, "
            f"max residual {s['max_residual']}")


def test_criterion_07_lemma():
    rep = run_suite("lemma", 1000, SEED, jobs=JOBS)
    s = _summary(rep)
    controls = s["tallies"]["control_rejected"]
    rate = controls.get("true", 0) / s["trials"]
    ok = rep.passed and all(s["kinds"].get(k, 0) >= 500 for k in ("euclidean", "minkowski")) and rate >= 0.99
    _record(7, "bisector lemma with probe independence", ok,
            f"{s['failures']} failures, kinds {s['kinds']}, controls rejected {rate:.1%}")


def test_criterion_08_inscribed():
    rep = run_suite("inscribed", 1000, SEED, jobs=JOBS)
    s = _summary(rep)
    ok = rep.passed and rep.max_residual <= 1e-8 \
        and all(s["kinds"].get(k, 0) >= 500 for k in ("euclidean", "minkowski"))
    _record(8, "inscribed cross ratios and triangle product", ok,
            f"{s['failures']} failures, max residual {s['max_residual']}, branches {s['tallies']['branch']}")


def test_criterion_09_fundamentals():
    rep = run_suite("fundamentals", 2000, SEED, jobs=JOBS)
    s = _summary(rep)
    t = s["tallies"]
    counts = {
        "normalization": s["trials"],
        "midpoints": t["midpoints_checked"].get("true", 0),
        "circumcircle": t["circumcircle_checked"].get("true", 0),
        "polar of O": s["trials"],
        "circular points": s["trials"],
    }
    ok = rep.passed and min(counts.values()) >= 1000
    _record(9, "fundamentals", ok, f"{s['failures']} failures, checks run {counts}")


def test_criterion_10_determinism_and_interfaces():
    bodies = [run_suite(name, 30, SEED).body() for name in ("thm1", "affine", "thm3")]
    again = [run_suite(name, 30, SEED, jobs=JOBS).body() for name in ("thm1", "affine", "thm3")]
    deterministic = bodies == again
    round_trip = True
    for kind in ("elliptic", "hyperbolic", "euclidean", "minkowski", "galilean"):
        for seed in range(10):
            text = emit_scenario(random_scene(kind, seed))
            round_trip &= emit_scenario(parse_scenario(text)) == text
    svg = emit_svg(random_scene("hyperbolic", 4))
    root = ET.fromstring(svg.split("\n", 1)[1])
    ns = "{http://www.w3.org/2000/svg}"
    conics = [p for p in root.iter(f"{ns}path") if p.get("class", "").startswith("conic")]
    mq = [c for c in root.iter(f"{ns}circle") if c.get("class") == "mq"]
    structure = len(conics) == 5 and sum("absolute" in p.get("class") for p in conics) == 1 and len(mq) == 1
    ok = deterministic and round_trip and structure
    _record(10, "determinism, scenario round trip, SVG structure", ok,
            f"byte-identical {deterministic}, round trip {round_trip}, "
            f"{len(conics)} conic paths and {len(mq)} Mq marker")
