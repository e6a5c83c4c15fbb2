import numpy as np
import pytest

from ckm.cayley_klein import Kind, normalize_point
from ckm.circles import (
    absolute_normal_form,
    circle_center,
    circle_decomposition,
    circular_points,
    circumcircle_through,
    frame_from_lemoine,
    frame_regular,
    frame_singular,
    lines_congruent,
    radical_line_at_vertex,
)
from ckm.errors import (
    CircumcenterForbiddenPosition,
    DegenerateConstruction,
    DegenerateQ,
    MixedCongruenceClasses,
    NotACircle,
)
from ckm.harness.generate import sample_k, sample_q
from ckm.projective import Conic, conic_eval, incidence, polar, proj_equal

EYE = np.eye(3)


def test_frame_regular_examples():
    fr = frame_regular(0, 0, 0)
    assert fr.circum.proj_equal(Conic.from_coefficients(yz=1, zx=1, xy=1))
    assert fr.K.proj_equal([1, 1, 1]) and fr.O.proj_equal([1, 1, 1])
    assert frame_regular(0.5, 0, 0).K.proj_equal([1, 2, 2])
    with pytest.raises(DegenerateQ):
        frame_regular(1, 0, 0)


def test_frame_singular_examples():
    fr = frame_singular([1, 1, -1])
    assert fr.K.proj_equal([1, 1, 3])
    for O in ([1, 1, 1], [0, 0, 1]):
        with pytest.raises(CircumcenterForbiddenPosition):
            frame_singular(O)


def test_frame_vertices_on_circumcircle(rng):
    for kind in ("elliptic", "hyperbolic"):
        fr = frame_regular(*sample_q(rng, kind))
        for P in (fr.A, fr.B, fr.C):
            assert abs(conic_eval(fr.circum, P.v)) < 1e-12


def test_circumcircle_of_frame_is_own_circum(rng):
    for kind in ("elliptic", "hyperbolic"):
        fr = frame_regular(*sample_q(rng, kind))
        assert circumcircle_through(EYE[0], EYE[1], EYE[2], fr).conic.proj_equal(fr.circum)
    for kind in ("euclidean", "minkowski", "galilean"):
        fr = frame_from_lemoine(sample_k(rng, kind))
        assert circumcircle_through(EYE[0], EYE[1], EYE[2], fr).conic.proj_equal(fr.circum)


def test_circumcircle_passes_through_vertices(rng):
    for kind in ("elliptic", "hyperbolic", "euclidean", "minkowski"):
        fr = frame_regular(*sample_q(rng, kind)) if kind in ("elliptic", "hyperbolic") \
            else frame_from_lemoine(sample_k(rng, kind))
        done = 0
        while done < 10:
            pts = rng.normal(size=(3, 3))
            try:
                c = circumcircle_through(*pts, fr)
            except MixedCongruenceClasses:
                continue
            for p in pts:
                assert abs(conic_eval(c.conic, p)) <= 1e-9 * c.conic.norm * (p @ p)
            done += 1


def test_euclidean_decomposition_example():
    fr = frame_from_lemoine((1, 1, 1))
    c = circumcircle_through([1, 0, 0], [3, 0, -1], [2, -1, 0], fr)
    dec = circle_decomposition(c.conic, fr)
    assert (dec.p, dec.q, dec.r) == pytest.approx((0, -2, -1.5))
    circ = circle_decomposition(fr.circum, fr)
    assert (circ.p, circ.q, circ.r) == pytest.approx((0, 0, 0), abs=1e-12)
    with pytest.raises(NotACircle):
        circle_decomposition(Conic(np.diag([1.0, 2.0, -3.0])), fr)


def test_mixed_classes_rejected():
    H = frame_regular(1.3, 1.2, 1.4)
    assert H.kind is Kind.HYPERBOLIC
    inside = [p for p in ([1, 1, 1], [1, 0, 0]) if H.S.form(p) < 0]
    outside = [p for p in ([1, -1, 0], [1, 1, 1], [0, 1, -1]) if H.S.form(p) > 0]
    with pytest.raises(MixedCongruenceClasses):
        circumcircle_through(inside[0], outside[0], outside[1], H)


def test_circle_center_examples():
    fr = frame_regular(0, 0, 0)
    assert circle_center(fr.circum, fr.S).proj_equal([1, 1, 1])
    with pytest.raises(NotACircle):
        circle_center(Conic(np.ones((3, 3))), fr.S)


def test_center_of_circumcircle_is_O(rng):
    for kind in ("elliptic", "hyperbolic") * 5:
        fr = frame_regular(*sample_q(rng, kind))
        assert circle_center(fr.circum, fr.S).proj_equal(fr.O.v)


def test_center_polars_coincide(rng):
    # the polar of the center with respect to a circle and to the absolute agree
    fr = frame_regular(*sample_q(rng, "elliptic"))
    for _ in range(10):
        c = circumcircle_through(*rng.normal(size=(3, 3)), fr)
        Z = c.center.v
        assert proj_equal(polar(c.conic, Z).l, polar(fr.S.phi, Z).l)


def test_absolute_normal_form_rank_one_difference(rng):
    fr = frame_regular(*sample_q(rng, "hyperbolic"))
    for _ in range(10):
        try:
            c = circumcircle_through(*rng.normal(size=(3, 3)), fr)
        except MixedCongruenceClasses:
            continue
        diff = absolute_normal_form(c.conic, fr.S) - fr.S.phi.m
        s = np.linalg.svd(diff, compute_uv=False)
        assert s[1] <= 1e-9 * s[0]


def test_polar_of_O_is_tripolar_of_G(rng):
    for kind in ("elliptic", "hyperbolic") * 5:
        fr = frame_regular(*sample_q(rng, kind))
        assert proj_equal(polar(fr.circum, fr.O.v).l, [1, 1, 1])
        assert proj_equal(polar(fr.S.phi, fr.O.v).l, [1, 1, 1])


def test_circular_points_galilean_double():
    fr = frame_from_lemoine((4, 1, 1))
    I, J = circular_points(fr)
    assert I.proj_equal([-2, 1, 1]) and J.proj_equal([-2, 1, 1])
    assert abs(conic_eval(fr.circum, I.v)) < 1e-12


def test_circular_points_minkowski_real_euclidean_complex():
    I, J = circular_points(frame_from_lemoine((9, 1, 1)))
    assert I.is_real and J.is_real and not I.proj_equal(J.v)
    I, J = circular_points(frame_from_lemoine((1, 1, 1)))
    assert not I.is_real and not J.is_real


def test_every_circle_passes_through_circular_points(rng):
    for kind in ("euclidean", "minkowski", "galilean"):
        fr = frame_from_lemoine(sample_k(rng, kind))
        I, J = circular_points(fr)
        for P in (I, J):
            assert abs(np.sum(P.v)) < 1e-12 * np.abs(P.v).sum()
        for _ in range(10):
            c = circumcircle_through(*rng.normal(size=(3, 3)), fr).conic
            for P in (I, J):
                v = P.v / np.linalg.norm(P.v)
                assert abs(conic_eval(c, v)) < 1e-9 * c.norm


def test_radical_line_at_vertex_example():
    fr = frame_regular(0, 0, 0)
    A, B, C = fr.A, fr.B, fr.C
    D, E, F = (normalize_point(p, fr.S) for p in ([0, 1, -1], [1, 0, -1], [1, -1, 0]))
    la = radical_line_at_vertex(A, B, C, E, F)
    lb = radical_line_at_vertex(B, A, C, D, F)
    for L in (la, lb):
        assert abs(incidence([-1, 1, -1], L)) < 1e-12
    with pytest.raises(DegenerateConstruction):
        radical_line_at_vertex(A, B, B, E, F)


def test_lines_congruent_minkowski():
    fr = frame_from_lemoine((9, 1, 1))
    L = np.array([1.0, 2.0, 0.5])
    assert lines_congruent(L, L, fr)
    assert lines_congruent(L, 3 * L + np.array([1, 1, 1]), fr)
    I, J = (P.v for P in circular_points(fr))
    # directions I+J and I-J are separated by the circular points
    G = np.array([1.0, 1.0, 1.0])
    assert not lines_congruent(np.cross(G, I + J), np.cross(G, I - J), fr)
    assert lines_congruent(np.cross(G, I + J), np.cross(G, I + 2 * J), fr)


def test_singular_center_is_supplied_O(rng):
    # the pole of the line at infinity w.r.t. the circumcircle reproduces O
    done = 0
    while done < 30:
        O = rng.normal(size=3)
        if abs(O.sum()) < 0.1 * np.abs(O).sum():
            continue
        fr = frame_singular(O)
        assert circle_center(fr.circum, fr.S).proj_equal(O)
        done += 1
