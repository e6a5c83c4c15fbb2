import numpy as np
import pytest
from hypothesis import given, strategies as st

from ckm.cayley_klein import (
    BOUNDARY,
    Kind,
    absolute_conic_barycentric,
    barycentric_form,
    classify_plane,
    combine,
    congruent,
    lemoine_from_circumcenter,
    midpoints,
    normalize_point,
    rho_squared,
    signature,
    triangle_region,
)
from ckm.errors import (
    CircumcenterForbiddenPosition,
    IsotropicPoint,
    MissingCircumcenter,
    NotCongruent,
    UnsupportedSignature,
)
from ckm.projective import proj_equal

HYP = np.diag([1.0, 1.0, -1.0])
ONES = np.ones((3, 3))


def test_classify_regular_kinds():
    assert classify_plane(np.eye(3)).kind is Kind.ELLIPTIC
    assert classify_plane(HYP).kind is Kind.HYPERBOLIC
    # an overall sign flip does not change the plane
    assert classify_plane(-np.eye(3)).kind is Kind.ELLIPTIC


def test_classify_reads_q():
    S = classify_plane(barycentric_form([0.5, -0.2, 0.3]))
    assert S.q == pytest.approx((0.5, -0.2, 0.3))


@pytest.mark.parametrize("k, kind, rho2", [
    ((1, 1, 1), Kind.EUCLIDEAN, -3.0),
    ((9, 1, 1), Kind.MINKOWSKI, 45.0),
    ((4, 1, 1), Kind.GALILEAN, 0.0),
])
def test_classify_singular_by_rho(k, kind, rho2):
    assert rho_squared(k) == pytest.approx(rho2)
    S = classify_plane(ONES, lemoine=k)
    assert S.kind is kind


def test_circumcenter_route_matches_lemoine():
    S = classify_plane(ONES, lemoine=(9, 1, 1))
    T = classify_plane(ONES, S.circumcenter_O)
    assert T.kind is Kind.MINKOWSKI and proj_equal(T.k, (9, 1, 1))
    # k=(1,1,1) puts O at G
    with pytest.raises(CircumcenterForbiddenPosition):
        classify_plane(ONES, classify_plane(ONES, lemoine=(1, 1, 1)).circumcenter_O)


def test_galilean_circumcenter_is_isotropic(rng):
    # the coordinate sum of O equals rho^2(k)
    for _ in range(20):
        k = rng.normal(size=3)
        assert lemoine_from_circumcenter(k).sum() == pytest.approx(rho_squared(k))
    O = classify_plane(ONES, lemoine=(4, 1, 1)).circumcenter_O
    assert abs(O.v.sum()) < 1e-12
    with pytest.raises(CircumcenterForbiddenPosition):
        classify_plane(ONES, O)


def test_lemoine_circumcenter_involution(rng):
    for _ in range(20):
        o = rng.normal(size=3)
        back = lemoine_from_circumcenter(lemoine_from_circumcenter(o))
        assert proj_equal(back, o)


def test_classify_singular_errors():
    with pytest.raises(MissingCircumcenter):
        classify_plane(ONES)
    for O in ([1, 1, 1], [0, 0, 1], [1, -1, 0]):
        with pytest.raises(CircumcenterForbiddenPosition):
            classify_plane(ONES, O)
    # rank-2 forms are out of scope
    with pytest.raises(UnsupportedSignature):
        classify_plane(np.diag([1.0, 1.0, 0.0]))


def test_signature_counts():
    assert signature(np.eye(3)) == (3, 0, 0)
    assert signature(HYP) == (2, 1, 0)
    assert signature(ONES) == (1, 0, 2)


def test_absolute_conic_barycentric():
    S0 = classify_plane(np.eye(3))
    np.testing.assert_allclose(absolute_conic_barycentric(S0).m, np.eye(3))
    S1 = classify_plane(barycentric_form([0.5, 0, 0]))
    assert absolute_conic_barycentric(S1).m[1, 2] == pytest.approx(0.5)
    Ss = classify_plane(ONES, lemoine=(1, 1, 1))
    np.testing.assert_allclose(absolute_conic_barycentric(Ss).m, ONES)


def test_normalize_point_examples():
    S = classify_plane(np.eye(3))
    p = normalize_point([2, 0, 0], S)
    np.testing.assert_allclose(p.v, [1, 0, 0])
    assert p.sign_class == 1
    p = normalize_point([0, 3, -3], S)
    np.testing.assert_allclose(p.v, np.array([0, 1, -1]) / np.sqrt(2))
    H = classify_plane(HYP)
    p = normalize_point([0, 0, 5], H)
    np.testing.assert_allclose(p.v, [0, 0, 1])
    assert p.sign_class == -1
    with pytest.raises(IsotropicPoint):
        normalize_point([1, 0, 1], H)


@given(st.tuples(*[st.floats(-5, 5, allow_nan=False)] * 3).filter(lambda v: np.linalg.norm(v) > 1e-2),
       st.floats(-20, 20).filter(lambda s: abs(s) > 1e-3))
def test_normalize_scale_invariant_and_unit(v, s):
    H = classify_plane(HYP)
    v = np.array(v)
    if abs(H.form(v)) < 1e-3 * (v @ v):
        return
    a, b = normalize_point(v, H), normalize_point(s * v, H)
    np.testing.assert_allclose(a.v, b.v, atol=1e-12)
    assert abs(H.form(a.v)) == pytest.approx(1.0)
    # idempotent
    np.testing.assert_allclose(normalize_point(a.v, H).v, a.v, atol=1e-12)


def test_congruence_examples():
    H = classify_plane(HYP)
    assert not congruent([0, 0, 1], [1, 0, 0], H)
    assert congruent([0, 0, 1], [1, 0, 2], H)
    E = classify_plane(np.eye(3))
    assert congruent([1, 2, 3], [-4, 0, 1], E)


def test_midpoints_examples():
    S = classify_plane(np.eye(3))
    mp = midpoints([1, 0, 0], [0, 1, 0], S)
    assert mp.m_plus.proj_equal([1, 1, 0]) and mp.m_minus.proj_equal([1, -1, 0])
    # Q=[0:0:-7] has chi=-1, so its representative is (0,0,1)
    mp = midpoints([3, 0, 0], [0, 0, -7], S)
    assert mp.m_plus.proj_equal([1, 0, 1]) and mp.m_minus.proj_equal([1, 0, -1])
    with pytest.raises(NotCongruent):
        midpoints([1, 0, 0], [0, 0, 1], classify_plane(HYP))


def test_midpoints_equidistant(rng):
    # <M, P°> = ±<M, Q°> for both midpoints, since phi(P°) = phi(Q°)
    S = classify_plane(barycentric_form([0.3, -0.4, 0.1]))
    for _ in range(50):
        P, Q = rng.normal(size=3), rng.normal(size=3)
        mp = midpoints(P, Q, S)
        a, b = normalize_point(P, S).v, normalize_point(Q, S).v
        for M in (mp.m_plus.v, mp.m_minus.v):
            assert abs(abs(S.bilinear(M, a)) - abs(S.bilinear(M, b))) < 1e-10 * np.linalg.norm(M)


def test_combine_and_regions():
    S = classify_plane(np.eye(3))
    A, B, C = (normalize_point(e, S) for e in np.eye(3))
    assert combine((1, 1, 1), (A, B, C)).proj_equal([1, 1, 1])
    assert combine((1, 0, 0), (A, B, C)).proj_equal([1, 0, 0])
    assert combine((1, -1, 0), (A, B, C)).proj_equal(midpoints(A.v, B.v, S).m_minus.v)
    assert triangle_region([1, 1, 1], A, B, C) == 0
    assert triangle_region([1, -1, -1], A, B, C) == 1
    assert triangle_region([-1, 1, -1], A, B, C) == 2
    assert triangle_region([0, 1, 1], A, B, C) == BOUNDARY
