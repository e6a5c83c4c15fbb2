"""Command-line entry point ``ckm``.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .cayley_klein import barycentric_form, classify_plane, signature
from .circles import circular_points
from .errors import GeometryError, ParseError, SchemaError, UnknownSuite
from .harness.figure import build_figure
from .harness.scenario import SUITE_NAMES, fmt, load_scenario
from .harness.suites import run_suite
from .miquel import (
    miquel_point_affine,
    miquel_point_of_lines,
    miquel_point_radical,
    miquel_point_regular,
    perspector,
    quadrilateral_scene,
    tetragon_miquel_triple,
    tetragon_scene,
    theorem3_check,
)
from .projective import canonical, proj_distance

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
ORACLE_TOL = 1e-8


def _vec(v) -> list:
    c = canonical(np.asarray(getattr(v, "v", v)))
    if np.iscomplexobj(c):
        return [f"{fmt(x.real)}{'+' if x.imag >= 0 else '-'}{fmt(abs(x.imag))}j" for x in c]
    return [fmt(x) for x in c]


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _read_text(arg: str) -> str:
    if os.path.exists(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def cmd_classify(args) -> int:
    text = _read_text(args.plane)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if isinstance(doc, dict) and "plane" in doc:
        doc = doc["plane"]
    if not isinstance(doc, dict):
        raise SchemaError("plane", "expected an object")
    try:
        if "phi" in doc:
            phi = np.array(doc["phi"], dtype=float)
            if phi.shape != (3, 3):
                raise SchemaError("plane.phi", "expected a 3x3 matrix")
            S = classify_plane(phi, doc.get("O") and np.array(doc["O"], dtype=float))
        elif "q" in doc:
            S = classify_plane(barycentric_form(np.array(doc["q"], dtype=float)))
        elif "k" in doc:
            S = classify_plane(np.ones((3, 3)), lemoine=np.array(doc["k"], dtype=float))
        elif "O" in doc:
            S = classify_plane(np.ones((3, 3)), np.array(doc["O"], dtype=float))
        else:
            raise SchemaError("plane", "expected one of phi, q, k, O")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, (SchemaError, GeometryError)):
            raise
        raise SchemaError("plane", str(exc)) from None
    out = {"kind": S.kind.value, "signature": list(signature(S.phi.m))}
    if S.q is not None:
        out["q"] = [fmt(x) for x in S.q]
    if S.k is not None:
        out["k"] = [fmt(x) for x in S.k]
        out["O"] = _vec(S.circumcenter_O)
    _emit(out)
    return EXIT_OK


def cmd_miquel(args) -> int:
    sc = load_scenario(args.scenario)
    frame = sc.frame()
    out = {"kind": frame.kind.value, "scene": sc.scene_type}
    ok = True
    if sc.scene_type == "quadrilateral":
        l, m, n = sc.scene_vector  # noqa: E741
        if frame.regular:
            scene = quadrilateral_scene(frame, l, m, n)
            res = miquel_point_regular(scene)
            gap = proj_distance(res.point, miquel_point_radical(scene))
            out["oracle_distance"] = fmt(gap)
            ok = gap <= ORACLE_TOL
        else:
            res = miquel_point_affine(l, m, n, frame)
        out.update(point=_vec(res.point), contact=res.contact.value, congruence_ok=res.congruence_ok)
    elif sc.scene_type == "lines":
        out["point"] = _vec(miquel_point_of_lines(list(sc.scene_vector), frame))
    else:
        raise SchemaError("scene.type", "use `ckm tetragon` for tetragon scenes")
    if not frame.regular and frame.kind.value != "galilean":
        out["circular_points"] = [_vec(p) for p in circular_points(frame)]
    out["verified"] = ok
    _emit(out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_tetragon(args) -> int:
    sc = load_scenario(args.scenario)
    if sc.scene_type != "tetragon":
        raise SchemaError("scene.type", "expected a tetragon scene")
    frame = sc.frame()
    tet = tetragon_scene(frame, sc.scene_vector)
    triple = tetragon_miquel_triple(tet)
    out = {
        "kind": frame.kind.value,
        "normalizers": {k: fmt(getattr(tet, k)) for k in ("alpha", "beta", "gamma", "delta")},
        "diagonal_points": [_vec(P) for P in (tet.P1, tet.P2, tet.P3)],
        "miquel_triangle": {name: _vec(M) for name, M in zip(("Mq_A", "Mq_B", "Mq_C"), triple)},
        "perspector": _vec(perspector(tet)),
    }
    r = theorem3_check(tet)
    out["concyclic"] = {
        "on_circumcircle": r.concyclic, "on_diagonal": r.on_diagonal,
        "delta_sum": fmt(r.delta_sum), "consistent": r.consistent,
    }
    _emit(out)
    return EXIT_OK if r.consistent else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.trials < 0 or args.jobs < 1:
        raise SchemaError("trials", "trials must be >= 0 and jobs >= 1")
    report = run_suite(args.suite, args.trials, args.seed, jobs=args.jobs)
    sys.stdout.write(report.body())
    print(f"{args.suite}: {args.trials} trials in {report.wall_time:.2f}s", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_figure(args) -> int:
    sc = load_scenario(args.scenario)
    fig = build_figure(sc, args.chart)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(fig.to_svg())
    for note in fig.skipped:
        print(f"skipped {note}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ckm", description="Cayley-Klein circle geometry and Miquel-Steiner points.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="classify an absolute form")
    c.add_argument("--plane", required=True, help="JSON file or inline JSON: {phi|q|k|O}")
    c.set_defaults(func=cmd_classify)

    m = sub.add_parser("miquel", help="Miquel-Steiner point of a quadrilateral scenario")
    m.add_argument("--scenario", required=True)
    m.set_defaults(func=cmd_miquel)

    t = sub.add_parser("tetragon", help="Miquel-Steiner triangle, perspector and the concyclicity test")
    t.add_argument("--scenario", required=True)
    t.set_defaults(func=cmd_tetragon)

    v = sub.add_parser("verify", help="run a randomized verification suite")
    v.add_argument("--suite", required=True, help=", ".join(SUITE_NAMES))
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--jobs", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("figure", help="draw a scenario as SVG")
    f.add_argument("--scenario", required=True)
    f.add_argument("--out", required=True)
    f.add_argument("--chart", choices=("auto", "barycentric", "disk"), default="auto")
    f.set_defaults(func=cmd_figure)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, SchemaError, GeometryError, UnknownSuite, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, UnknownSuite) and exc.args else exc
        print(f"ckm: error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
