import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from homconn import moduli
from homconn.errors import NotEquivariant, NotInSolutionSpace, NotTraceless
from homconn.lie import hat
from homconn.moduli import (
    BianchiCanonical,
    ChartPoint,
    axial_canonical,
    axial_coefficients,
    axial_gauge,
    axial_matrix,
    axial_su2_modulus,
    bianchi_canonical,
    bianchi_chart,
    bianchi_chart_inv,
    bianchi_equiv,
    chart_minus,
    chart_plus,
    classify_stratum,
    iso_modulus,
    iso_su2_modulus,
    su2_to_so3_class,
    verify_s1_sextic,
)
from homconn.numerics import numeric_rank, procrustes_align, sample_array

mat3 = arrays(np.float64, (3, 3), elements=st.floats(-50, 50, allow_nan=False))
D123 = np.diag([1.0, 2.0, 3.0])
A0 = np.diag([-1.0, 0.0, 1.0])


def chart_of(m):
    return bianchi_chart(bianchi_canonical(m))


def rotations(seed, n):
    return sample_array("rotation", seed, n)


# -- canonical form -----------------------------------------------------------


def test_canonical_examples():
    c = bianchi_canonical(np.eye(3))
    np.testing.assert_allclose(c.p_psd, np.eye(3), atol=1e-15)
    assert c.sign == "plus"

    c = bianchi_canonical(np.diag([1.0, 1.0, -1.0]))
    np.testing.assert_allclose(c.p_psd, np.eye(3), atol=1e-15)
    assert c.sign == "minus"
    np.testing.assert_allclose(c.representative(), -np.eye(3), atol=1e-15)

    c = bianchi_canonical(np.diag([2.0, 0.0, 0.0]))
    np.testing.assert_allclose(c.p_psd, np.diag([2.0, 0.0, 0.0]), atol=1e-15)
    assert c.sign == "boundary"


def test_boundary_rotation_witness():
    m = np.diag([2.0, 0.0, 0.0])
    r = np.diag([-1.0, 1.0, -1.0])
    np.testing.assert_array_equal(r @ m, -m)
    _, res = procrustes_align(m, -m)
    assert res <= 1e-12


@settings(max_examples=200, deadline=None)
@given(mat3)
def test_canonical_is_orbit_invariant(m):
    r = rotations(11, 1)[0]
    a1, l1 = chart_of(m).a, chart_of(m).lam
    c2 = chart_of(r @ m)
    tol = 1e-7 * max(1.0, np.linalg.norm(m, 2))
    assert np.abs(c2.a - a1).max() <= tol
    assert abs(c2.lam - l1) <= tol


def test_canonical_batch_matches_single():
    m = sample_array("gaussian_mat3", 21, 40)
    p, sign, _ = moduli.canonical_arrays(m)
    for k in (0, 13, 39):
        c = bianchi_canonical(m[k])
        np.testing.assert_array_equal(c.p_psd, p[k])
        assert c.sign == moduli.SIGN_NAMES[int(sign[k])]


def test_positive_scaling():
    m = sample_array("gaussian_mat3", 22, 200)
    a, lam = moduli.chart_of_matrices(m)
    for c in (0.01, 3.0, 250.0):
        ac, lc = moduli.chart_of_matrices(c * m)
        np.testing.assert_allclose(ac, c * a, atol=1e-8 * c)
        np.testing.assert_allclose(lc, c * lam, atol=1e-8 * c)


# -- chart --------------------------------------------------------------------


def test_chart_examples():
    p = bianchi_chart(BianchiCanonical(D123, "plus"))
    np.testing.assert_allclose(p.a, A0, atol=1e-14)
    assert p.lam == pytest.approx(1.0)

    p = bianchi_chart(BianchiCanonical(np.zeros((3, 3)), "boundary"))
    np.testing.assert_array_equal(p.a, np.zeros((3, 3)))
    assert p.lam == 0.0


def test_chart_negative_branch_example():
    # the rotation acts on the left, so the orbit of -diag(1,2,3) is R0 @ (-diag(1,2,3))
    r0 = rotations(5, 1)[0]
    p = chart_of(r0 @ -D123)
    np.testing.assert_allclose(p.a, A0, atol=1e-13)
    assert p.lam == pytest.approx(-1.0)


def test_chart_inv_examples():
    c = bianchi_chart_inv(ChartPoint(A0, 1.0))
    np.testing.assert_allclose(c.p_psd, D123, atol=1e-14)
    assert c.sign == "plus"

    c = bianchi_chart_inv(ChartPoint(np.zeros((3, 3)), 0.0))
    np.testing.assert_array_equal(c.p_psd, np.zeros((3, 3)))
    assert c.sign == "boundary"

    c = bianchi_chart_inv((A0, -1.0))
    np.testing.assert_allclose(c.p_psd, D123, atol=1e-14)
    assert c.sign == "minus"
    np.testing.assert_allclose(c.representative(), -D123, atol=1e-14)


def test_chart_point_rejects_trace():
    with pytest.raises(NotTraceless):
        ChartPoint(np.eye(3), 0.0)


def test_chart_round_trips():
    m = sample_array("gaussian_mat3", 23, 2000)
    p, sign, _ = moduli.canonical_arrays(m)
    a, lam = moduli.chart_arrays(p, sign)
    p2, sign2 = moduli.chart_inv_arrays(a, lam)
    np.testing.assert_allclose(p2, p, atol=1e-8)
    np.testing.assert_array_equal(sign2, sign)

    g = sample_array("gaussian_mat3", 24, 2000)
    s = 0.5 * (g + np.swapaxes(g, 1, 2))
    a = s - np.trace(s, axis1=1, axis2=2)[:, None, None] / 3 * np.eye(3)
    lam = sample_array("gaussian_mat3", 25, 2000)[:, 0, 0]
    a2, lam2 = moduli.chart_arrays(*moduli.chart_inv_arrays(a, lam))
    np.testing.assert_allclose(a2, a, atol=1e-8)
    np.testing.assert_allclose(lam2, lam, atol=1e-8)


def test_gluing_on_boundary():
    for q, d in zip(rotations(26, 50), np.abs(sample_array("gaussian_mat3", 27, 50)[:, 0])):
        d[0] = 0.0
        p = q @ np.diag(d) @ q.T
        plus = bianchi_chart(BianchiCanonical(p, "boundary"))
        minus = chart_minus(-p)
        assert plus.lam == 0.0 and minus.lam == 0.0
        np.testing.assert_allclose(minus.a, plus.a, atol=1e-10)
        np.testing.assert_allclose(chart_plus(p).a, plus.a, atol=1e-10)


def test_chart_plus_minus_on_interior():
    p = chart_plus(D123)
    np.testing.assert_allclose(p.a, A0, atol=1e-14)
    assert p.lam == pytest.approx(1.0)
    n = chart_minus(-D123)
    np.testing.assert_allclose(n.a, A0, atol=1e-14)
    assert n.lam == pytest.approx(-1.0)


# -- strata -------------------------------------------------------------------


@pytest.mark.parametrize(
    "a, lam, index",
    [
        (A0, 5.0, 3),
        (np.diag([-1.0, -1.0, 2.0]), 0.0, 1),
        (np.diag([1.0, 1.0, -2.0]), 0.0, 2),
        (np.zeros((3, 3)), 0.0, 0),
    ],
)
def test_stratum_examples(a, lam, index):
    s = classify_stratum(ChartPoint(a, lam))
    assert s.index == index
    assert s.checks_agree


def test_s1_discriminant_example():
    s = classify_stratum(ChartPoint(np.diag([-1.0, -1.0, 2.0]), 0.0))
    assert s.discriminant == pytest.approx(0.0, abs=1e-12)
    assert s.discriminant_s1


def test_stratum_matches_rank_of_inverse_chart():
    qs = rotations(28, 40)
    for q, mu in zip(qs, np.linspace(0.1, 5.0, 40)):
        cases = {
            0: np.zeros((3, 3)),
            1: np.diag([-mu, -mu, 2 * mu]),
            2: np.diag([-mu, 0.3 * mu, 0.7 * mu]),
        }
        for index, d in cases.items():
            p = ChartPoint(q @ d @ q.T, 0.0)
            assert classify_stratum(p).index == index
            assert numeric_rank(bianchi_chart_inv(p).p_psd) == index
        p = ChartPoint(q @ cases[2] @ q.T, -mu)
        assert classify_stratum(p).index == 3
        assert numeric_rank(bianchi_chart_inv(p).p_psd) == 3


def test_discriminant_rejects_negative_det_controls():
    for q in rotations(29, 20):
        s = classify_stratum(ChartPoint(q @ np.diag([1.0, 1.0, -2.0]) @ q.T, 0.0))
        assert s.index == 2 and not s.discriminant_s1


def test_discriminant_identity_symbolic():
    sp = pytest.importorskip("sympy")
    m1, m2 = sp.symbols("mu1 mu2")
    ev = (m1, m2, -m1 - m2)
    e2 = ev[0] * ev[1] + ev[0] * ev[2] + ev[1] * ev[2]
    det = ev[0] * ev[1] * ev[2]
    disc = sp.expand(27 * det**2 + 4 * e2**3)
    assert sp.expand(disc + (m1 - m2) ** 2 * (m1 + 2 * m2) ** 2 * (2 * m1 + m2) ** 2) == 0


def test_sextic_symbolic_oracle():
    sp = pytest.importorskip("sympy")
    t, m2 = sp.symbols("t mu2")
    ev = (t * m2, m2, -t * m2 - m2)
    e2 = ev[0] * ev[1] + ev[0] * ev[2] + ev[1] * ev[2]
    det = ev[0] * ev[1] * ev[2]
    quotient = sp.cancel(-(27 * det**2 + 4 * e2**3) / m2**6)
    coeffs = tuple(int(c) for c in sp.Poly(quotient, t).all_coeffs())
    assert coeffs == moduli.SEXTIC
    assert verify_s1_sextic()


def test_sextic_values():
    p = moduli.SEXTIC
    assert moduli._polyval(p, Fraction(1)) == 0
    assert moduli._polyval(p, Fraction(-2)) == 0
    assert moduli._polyval(moduli._polyder(p), Fraction(-2)) == 0
    assert moduli._polyval(p, Fraction(0)) == 4
    assert moduli.sextic_expansion() == p


# -- equivalence --------------------------------------------------------------


def test_equiv_examples():
    m = sample_array("gaussian_mat3", 30, 1)[0]
    r0 = rotations(31, 1)[0]
    assert bianchi_equiv(m, r0 @ m)
    assert bianchi_equiv(np.diag([2.0, 0, 0]), -np.diag([2.0, 0, 0]))
    assert not bianchi_equiv(np.eye(3), -np.eye(3))


def test_equiv_soundness_against_procrustes():
    m = sample_array("gaussian_mat3", 32, 300)
    n = sample_array("gaussian_mat3", 33, 300)
    n[:150] = rotations(34, 150) @ m[:150]
    same = moduli.equiv_arrays(m, n)
    _, res = procrustes_align(m, n)
    assert same[:150].all()
    assert np.all(res[same] <= 1e-6 * np.maximum(1, np.linalg.norm(m[same], 2, axis=(1, 2))))
    assert np.all(res[~same] > 1e-4)


# -- su(2) -> so(3) -----------------------------------------------------------


def test_su2_to_so3_examples():
    np.testing.assert_array_equal(su2_to_so3_class(np.zeros((3, 3))), np.zeros((3, 3)))
    np.testing.assert_allclose(su2_to_so3_class(np.eye(3)), -2 * np.eye(3), atol=1e-14)


def test_su2_to_so3_preserves_and_reflects_equivalence():
    m = sample_array("gaussian_mat3", 35, 200)
    n = sample_array("gaussian_mat3", 36, 200)
    n[:100] = rotations(37, 100) @ m[:100]
    conv = lambda x: np.stack([su2_to_so3_class(y) for y in x])
    np.testing.assert_array_equal(moduli.equiv_arrays(m, n), moduli.equiv_arrays(conv(m), conv(n)))


def test_su2_to_so3_columnwise_hat():
    lam = sample_array("gaussian_mat3", 38, 1)[0]
    out = su2_to_so3_class(lam)
    for i in range(3):
        np.testing.assert_allclose(hat(out[:, i]), hat(-2 * lam[:, i]), atol=1e-13)


# -- axial and isotropic ------------------------------------------------------


def test_axial_canonical_examples():
    assert axial_canonical(2, 3, 4) == moduli.AxialModulus(2.0, 5.0)
    assert axial_canonical(-1.5, 0, 0) == moduli.AxialModulus(-1.5, 0.0)
    for phi in np.linspace(0, 2 * math.pi, 9):
        mod = axial_canonical(0, math.cos(phi), math.sin(phi))
        assert mod.a == 0.0 and mod.r == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=200, deadline=None)
@given(
    st.floats(-100, 100, allow_nan=False),
    st.floats(-100, 100, allow_nan=False),
    st.floats(-100, 100, allow_nan=False),
    st.floats(0, 2 * math.pi),
)
def test_axial_gauge_invariance(a, b, c, theta):
    lam = axial_gauge(theta, axial_matrix(a, b, c))
    mod = axial_canonical(*axial_coefficients(lam))
    ref = axial_canonical(a, b, c)
    assert mod.r >= 0
    assert abs(mod.a - ref.a) <= 1e-10 * max(1.0, abs(a))
    assert abs(mod.r - ref.r) <= 1e-10 * max(1.0, ref.r)


def test_axial_coefficients_rejects_non_axial():
    with pytest.raises(NotInSolutionSpace):
        axial_coefficients(np.diag([0.0, 1.0, -1.0]))


def test_axial_representative():
    np.testing.assert_array_equal(moduli.axial_representative(axial_canonical(2, 3, 4)), np.diag([2.0, 5.0, 5.0]))


def test_axial_su2_modulus_examples():
    assert axial_su2_modulus(1, np.diag([5.0, 0, 0])) == moduli.AxialSU2Modulus(1, 5.0)
    assert axial_su2_modulus(1, np.zeros((3, 3))) == moduli.AxialSU2Modulus(1, 0.0)
    lam = np.zeros((3, 3))
    lam[:, 0] = [3.0, 4.0, 0.0]
    mod = axial_su2_modulus(0, lam)
    assert mod.n == 0 and mod.c == pytest.approx(5.0)


def test_axial_su2_modulus_rejects_non_intertwiner():
    with pytest.raises(NotInSolutionSpace):
        axial_su2_modulus(2, np.eye(3))


def test_iso_examples():
    assert iso_modulus(3 * np.eye(3)) == pytest.approx(3.0)
    assert iso_modulus(np.zeros((3, 3))) == 0.0
    with pytest.raises(NotEquivariant) as info:
        iso_modulus(D123)
    assert info.value.residual >= 1.0
    assert info.value.witness is not None


def test_iso_su2_is_a_point():
    assert iso_su2_modulus(np.zeros((3, 3))) == 0
    with pytest.raises(NotEquivariant):
        iso_su2_modulus(np.eye(3))
