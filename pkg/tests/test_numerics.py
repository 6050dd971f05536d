import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from homconn import numerics
from homconn.errors import NoConvergence, NonFinite, NonSymmetric
from homconn.numerics import (
    ToleranceConfig,
    char_invariants,
    numeric_rank,
    procrustes_align,
    psd_sqrt_factor,
    sample,
    sample_array,
    sym_eigen,
)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
mat3 = arrays(np.float64, (3, 3), elements=finite)


def test_eigen_identity():
    es = sym_eigen(np.eye(3))
    np.testing.assert_array_equal(es.values, [1, 1, 1])
    np.testing.assert_allclose(es.vectors.T @ es.vectors, np.eye(3), atol=1e-15)


def test_eigen_diagonal_permutes_axes():
    es = sym_eigen(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_array_equal(es.values, [1, 2, 3])
    expected = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=float)
    np.testing.assert_array_equal(es.vectors, expected)


def test_eigen_known_spectrum():
    q = sample_array("rotation", 3, 1)[0]
    s = q @ np.diag([-1.0, 0.0, 2.0]) @ q.T
    es = sym_eigen(s)
    np.testing.assert_allclose(es.values, [-1, 0, 2], atol=1e-13)
    np.testing.assert_allclose(es.reconstruct(), s, atol=1e-13)


def test_eigen_matches_lapack_oracle():
    g = sample_array("gaussian_mat3", 9, 500)
    s = g + np.swapaxes(g, 1, 2)
    values, _ = numerics.sym_eigen_batch(s)
    np.testing.assert_allclose(values, np.linalg.eigvalsh(s), atol=1e-12)


def test_eigen_sign_convention():
    q = sample_array("rotation", 4, 1)[0]
    vecs = sym_eigen(q @ np.diag([1.0, 2.0, 3.0]) @ q.T).vectors
    for col in vecs.T:
        assert col[np.argmax(np.abs(col))] > 0


def test_eigen_deterministic_and_batch_independent():
    g = sample_array("gaussian_mat3", 5, 20)
    s = g + np.swapaxes(g, 1, 2)
    values, vectors = numerics.sym_eigen_batch(s)
    single = sym_eigen(s[7])
    np.testing.assert_array_equal(single.values, values[7])
    np.testing.assert_array_equal(single.vectors, vectors[7])
    again = sym_eigen(s[7])
    np.testing.assert_array_equal(again.vectors, single.vectors)


def test_eigen_rejects_nonsymmetric():
    with pytest.raises(NonSymmetric):
        sym_eigen(np.array([[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]))


def test_eigen_rejects_nonfinite():
    with pytest.raises(NonFinite):
        sym_eigen(np.full((3, 3), np.nan))


def test_eigen_iteration_cap(monkeypatch):
    monkeypatch.setattr(numerics, "MAX_SWEEPS", 0)
    with pytest.raises(NoConvergence):
        sym_eigen(np.array([[1.0, 1.0, 0.0], [1.0, 2.0, 0.5], [0.0, 0.5, 3.0]]))


@settings(max_examples=200, deadline=None)
@given(mat3)
def test_eigen_reconstruction_property(g):
    s = g + g.T
    es = sym_eigen(s)
    scale = max(1.0, np.linalg.norm(s))
    assert np.linalg.norm(es.reconstruct() - s) <= 1e-12 * scale
    assert np.all(np.diff(es.values) >= 0)
    np.testing.assert_allclose(es.vectors.T @ es.vectors, np.eye(3), atol=1e-12)


def test_psd_sqrt_examples():
    np.testing.assert_allclose(psd_sqrt_factor(np.eye(3)), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(psd_sqrt_factor(np.diag([-3.0, 4.0, 0.0])), np.diag([3.0, 4.0, 0.0]), atol=1e-14)
    r = sample_array("rotation", 1, 1)[0]
    np.testing.assert_allclose(psd_sqrt_factor(r), np.eye(3), atol=1e-14)


@settings(max_examples=200, deadline=None)
@given(mat3)
def test_psd_sqrt_property(m):
    p = psd_sqrt_factor(m)
    mtm = m.T @ m
    assert np.abs(p - p.T).max() == 0.0
    assert np.linalg.norm(p @ p - mtm) <= 1e-10 * max(1.0, np.linalg.norm(mtm))
    assert np.linalg.eigvalsh(p).min() >= -1e-12 * max(1.0, np.linalg.norm(p))


def test_psd_sqrt_keeps_small_singular_values():
    m = np.diag([1.0, 1.0, 1e-12])
    np.testing.assert_allclose(np.linalg.eigvalsh(psd_sqrt_factor(m)), [1e-12, 1, 1], rtol=1e-6)


@pytest.mark.parametrize(
    "m, expected",
    [
        (np.eye(3), (3, 3, 1)),
        (np.diag([-1.0, -1.0, 2.0]), (0, -3, 2)),
        (np.zeros((3, 3)), (0, 0, 0)),
    ],
)
def test_char_invariants_examples(m, expected):
    ci = char_invariants(m)
    assert (ci.trace, ci.e2, ci.det) == pytest.approx(expected)


@settings(max_examples=200, deadline=None)
@given(mat3)
def test_char_poly_vanishes_on_eigenvalues(g):
    s = g + g.T
    ci = char_invariants(s)
    for t in np.linalg.eigvalsh(s):
        assert abs(ci.poly(t)) <= 1e-9 * max(1.0, np.linalg.norm(s, 2) ** 3)


def test_numeric_rank_examples():
    assert numeric_rank(np.eye(3)) == 3
    assert numeric_rank(np.diag([2.0, 0.0, 0.0])) == 1
    v = np.array([1.0, 2.0, 3.0])
    assert numeric_rank(1e-15 * np.outer(v, v), ToleranceConfig(eps_rank=1e-9)) == 0


@pytest.mark.parametrize("c", [1e-3, 1.0, 1e3])
def test_numeric_rank_scale_invariance(c):
    m = sample_array("gaussian_mat3", 2, 50)
    m[:25, :, 2] = 0.0
    m /= np.linalg.norm(m, 2, axis=(1, 2))[:, None, None]
    np.testing.assert_array_equal(numeric_rank(c * m), numeric_rank(m))


def test_procrustes_examples():
    m = sample_array("gaussian_mat3", 1, 1)[0]
    r, res = procrustes_align(m, m)
    np.testing.assert_allclose(r, np.eye(3), atol=1e-12)
    assert res == pytest.approx(0, abs=1e-12)

    r0 = sample_array("rotation", 2, 1)[0]
    r, res = procrustes_align(np.eye(3), r0)
    np.testing.assert_allclose(r, r0, atol=1e-12)
    assert res <= 1e-12

    _, res = procrustes_align(m, r0 @ m)
    assert res <= 1e-10


def test_procrustes_beats_sampled_rotations():
    m = sample_array("gaussian_mat3", 3, 50)
    n = sample_array("gaussian_mat3", 4, 50)
    r, res = procrustes_align(m, n)
    trials = sample_array("rotation", 5, 100)
    others = np.linalg.norm(trials[None] @ m[:, None] - n[:, None], axis=(2, 3))
    assert np.all(res[:, None] <= others + 1e-12)
    np.testing.assert_allclose(np.linalg.det(r), 1.0, atol=1e-12)


def test_procrustes_degenerate_input_returns_rotation():
    r, res = procrustes_align(np.diag([1.0, 0.0, 0.0]), np.diag([-1.0, 0.0, 0.0]))
    np.testing.assert_allclose(r.T @ r, np.eye(3), atol=1e-12)
    assert np.linalg.det(r) == pytest.approx(1.0)
    assert res <= 1e-12


def test_sample_rotation_membership_and_determinism():
    (r,) = sample("rotation", 17, 1)
    assert np.abs(r.T @ r - np.eye(3)).max() <= 1e-12
    assert abs(np.linalg.det(r) - 1) <= 1e-12
    for kind in ("rotation", "unit_quaternion", "gaussian_mat3"):
        np.testing.assert_array_equal(sample_array(kind, 5, 10), sample_array(kind, 5, 10))
    assert sample("rotation", 0, 0) == []


def test_haar_trace_mean():
    r = sample_array("rotation", 123, 10_000)
    assert abs(np.trace(r, axis1=1, axis2=2).mean()) < 0.1


def test_tolerance_config_rejects_nonpositive():
    with pytest.raises(ValueError):
        ToleranceConfig(eps_eq=0.0)
