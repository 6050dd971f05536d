"""Fixed-size linear algebra on 3x3 real matrices.

Most routines accept a single ``(3, 3)`` array or a stack ``(..., 3, 3)``
and broadcast over the leading axes.  Per-item results never depend on
the other members of a stack, so batch and single calls agree bit for bit.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, NonFinite, NonSymmetric

MAX_SWEEPS = 50
JACOBI_RTOL = 1e-14
_PAIRS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class ToleranceConfig:
    eps_sym: float = 1e-10
    eps_rank: float = 1e-9
    eps_eq: float = 1e-8
    eps_recon: float = 1e-10

    def __post_init__(self):
        for name in ("eps_sym", "eps_rank", "eps_eq", "eps_recon"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues and the matching orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        return (self.vectors * self.values[..., None, :]) @ np.swapaxes(self.vectors, -1, -2)


@dataclass(frozen=True)
class CharInvariants:
    trace: float
    e2: float
    det: float

    def poly(self, t):
        """Characteristic polynomial t^3 - trace t^2 + e2 t - det."""
        return ((t - self.trace) * t + self.e2) * t - self.det


def as_mat3(m, name="matrix"):
    """Validate and convert to a float array of shape (..., 3, 3)."""
    a = np.asarray(m, dtype=float)
    if a.ndim < 2 or a.shape[-2:] != (3, 3):
        raise NonFinite(f"{name} must have shape (3, 3), got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite(f"{name} has non-finite entries")
    return a


def spectral_norm(m):
    return np.linalg.svd(np.asarray(m, dtype=float), compute_uv=False)[..., 0]


def _jacobi(a):
    """Cyclic Jacobi on a stack (n, 3, 3) of symmetric matrices."""
    n = a.shape[0]
    v = np.broadcast_to(np.eye(3), (n, 3, 3)).copy()
    target = JACOBI_RTOL * np.sqrt(np.sum(a * a, axis=(1, 2)))
    idx = np.arange(n)
    for _ in range(MAX_SWEEPS + 1):
        off = np.sqrt(2.0 * (a[:, 0, 1] ** 2 + a[:, 0, 2] ** 2 + a[:, 1, 2] ** 2))
        active = off > target
        if not active.any():
            return a, v
        for p, q in _PAIRS:
            apq = a[:, p, q]
            rotate = active & (apq != 0.0)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                theta = (a[:, q, q] - a[:, p, p]) / (2.0 * apq)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t = np.where(rotate & np.isfinite(t), t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            j = np.broadcast_to(np.eye(3), (n, 3, 3)).copy()
            j[idx, p, p] = c
            j[idx, q, q] = c
            j[idx, p, q] = s
            j[idx, q, p] = -s
            a = np.swapaxes(j, 1, 2) @ a @ j
            v = v @ j
    raise NoConvergence(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")


def sym_eigen_batch(s, cfg=DEFAULT_TOL):
    """Eigen-decompose a stack of symmetric 3x3 matrices.

    Returns ``(values, vectors)`` with values ascending along the last axis
    and eigenvectors as columns.  Each eigenvector is signed so that its
    largest-magnitude component is nonnegative (lowest index wins ties).
    """
    s = as_mat3(s)
    shape = s.shape[:-2]
    flat = s.reshape(-1, 3, 3)
    asym = np.max(np.abs(flat - np.swapaxes(flat, 1, 2)), axis=(1, 2), initial=0.0)
    scale = np.maximum(1.0, np.max(np.abs(flat), axis=(1, 2), initial=0.0))
    if np.any(asym > cfg.eps_sym * scale):
        raise NonSymmetric(f"matrix is not symmetric (max asymmetry {asym.max():.3e})")
    a, v = _jacobi(0.5 * (flat + np.swapaxes(flat, 1, 2)))

    values = np.diagonal(a, axis1=1, axis2=2)
    order = np.argsort(values, axis=1, kind="stable")
    values = np.take_along_axis(values, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)

    lead = np.argmax(np.abs(v), axis=1)
    lead_val = np.take_along_axis(v, lead[:, None, :], axis=1)[:, 0, :]
    v = v * np.where(lead_val < 0, -1.0, 1.0)[:, None, :]
    return values.reshape(shape + (3,)), v.reshape(shape + (3, 3))


def sym_eigen(s, cfg=DEFAULT_TOL):
    values, vectors = sym_eigen_batch(s, cfg)
    return EigenSystem(values, vectors)


def sym_eigvals(s, cfg=DEFAULT_TOL):
    return sym_eigen_batch(s, cfg)[0]


def polar_factors(m, cfg=DEFAULT_TOL):
    """Return ``(P, sigma, V)`` with P = sqrt(M^T M) = V diag(sigma) V^T.

    Singular values are taken as the column norms of M V rather than square
    roots of eigenvalues, which keeps small ones accurate to roundoff.
    """
    m = as_mat3(m)
    _, v = sym_eigen_batch(np.swapaxes(m, -1, -2) @ m, cfg)
    sigma = np.sqrt(np.sum((m @ v) ** 2, axis=-2))
    p = (v * sigma[..., None, :]) @ np.swapaxes(v, -1, -2)
    p = 0.5 * (p + np.swapaxes(p, -1, -2))
    return p, sigma, v


def psd_sqrt_factor(m, cfg=DEFAULT_TOL):
    return polar_factors(m, cfg)[0]


def det3(m):
    m = np.asarray(m, dtype=float)
    return (
        m[..., 0, 0] * (m[..., 1, 1] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 1])
        - m[..., 0, 1] * (m[..., 1, 0] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 0])
        + m[..., 0, 2] * (m[..., 1, 0] * m[..., 2, 1] - m[..., 1, 1] * m[..., 2, 0])
    )


def char_invariants_arrays(m):
    """Vectorized ``(trace, e2, det)``."""
    m = np.asarray(m, dtype=float)
    tr = np.trace(m, axis1=-2, axis2=-1)
    tr_sq = np.einsum("...ij,...ji->...", m, m)
    return tr, 0.5 * (tr * tr - tr_sq), det3(m)


def char_invariants(m):
    tr, e2, det = char_invariants_arrays(as_mat3(m))
    return CharInvariants(float(tr), float(e2), float(det))


def numeric_rank(m, cfg=DEFAULT_TOL):
    """Number of singular values above ``eps_rank * max(1, sigma_max)``."""
    sv = np.linalg.svd(as_mat3(m), compute_uv=False)
    thresh = cfg.eps_rank * np.maximum(1.0, sv[..., :1])
    rank = np.sum(sv > thresh, axis=-1)
    return int(rank) if rank.ndim == 0 else rank


def procrustes_align(m, n):
    """Rotation R in SO(3) minimizing ||R M - N||_F, with the minimum.

    Works on stacks as well; degenerate inputs still get a minimizer.
    """
    m = as_mat3(m, "M")
    n = as_mat3(n, "N")
    u, _, vt = np.linalg.svd(n @ np.swapaxes(m, -1, -2))
    d = np.sign(det3(u @ vt))
    d = np.where(d == 0, 1.0, d)
    u = u.copy()
    u[..., :, 2] *= d[..., None]
    r = u @ vt
    residual = np.sqrt(np.sum((r @ m - n) ** 2, axis=(-2, -1)))
    if residual.ndim == 0:
        residual = float(residual)
    return r, residual


def rng(seed):
    """Counter-based generator keyed by ``seed`` (an int or a tuple of ints)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def quat_to_matrix(q):
    """Rotation matrix of a unit quaternion (w, x, y, z), standard convention."""
    q = np.asarray(q, dtype=float)
    w, x, y, z = np.moveaxis(q, -1, 0)
    out = np.empty(q.shape[:-1] + (3, 3))
    out[..., 0, 0] = 1 - 2 * (y * y + z * z)
    out[..., 0, 1] = 2 * (x * y - w * z)
    out[..., 0, 2] = 2 * (x * z + w * y)
    out[..., 1, 0] = 2 * (x * y + w * z)
    out[..., 1, 1] = 1 - 2 * (x * x + z * z)
    out[..., 1, 2] = 2 * (y * z - w * x)
    out[..., 2, 0] = 2 * (x * z - w * y)
    out[..., 2, 1] = 2 * (y * z + w * x)
    out[..., 2, 2] = 1 - 2 * (x * x + y * y)
    return out


SAMPLE_KINDS = ("rotation", "unit_quaternion", "gaussian_mat3")


def sample_array(kind, seed, count):
    if count < 0:
        raise ValueError("count must be nonnegative")
    gen = rng(seed)
    if kind == "gaussian_mat3":
        return gen.standard_normal((count, 3, 3))
    if kind not in ("rotation", "unit_quaternion"):
        raise ValueError(f"unknown sample kind {kind!r}")
    q = gen.standard_normal((count, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    return q if kind == "unit_quaternion" else quat_to_matrix(q)


def sample(kind, seed, count):
    """Deterministic samples: Haar rotations, unit quaternions or Gaussian matrices."""
    return list(sample_array(kind, seed, count))
