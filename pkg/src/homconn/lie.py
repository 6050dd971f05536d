"""SO(3), SU(2) and U(1): identifications, the double cover and isotropy maps.

su(2) is realized by the traceless anti-Hermitian matrices

    sigma(x, y, z) = [[i x, -y + i z], [y + i z, -i x]]

and a unit quaternion (w, x, y, z) stands for ``w I + sigma(x, y, z)``.
With this basis the differential of the cover satisfies
``rho_star(u) == hat(-2 u)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonAntisymmetric, NotInAlgebra
from .numerics import DEFAULT_TOL, as_mat3

TWO_PI = 2.0 * math.pi


def hat(v):
    """Antisymmetric matrix with hat(v) @ w == cross(v, w)."""
    v = np.asarray(v, dtype=float)
    x, y, z = np.moveaxis(v, -1, 0)
    zero = np.zeros_like(x)
    return np.stack(
        [
            np.stack([zero, -z, y], axis=-1),
            np.stack([z, zero, -x], axis=-1),
            np.stack([-y, x, zero], axis=-1),
        ],
        axis=-2,
    )


def unhat(m, cfg=DEFAULT_TOL):
    m = as_mat3(m)
    sym = np.max(np.abs(m + np.swapaxes(m, -1, -2)))
    if sym > cfg.eps_sym * max(1.0, float(np.max(np.abs(m)))):
        raise NonAntisymmetric(f"matrix is not antisymmetric (max |M + M^T| = {sym:.3e})")
    return 0.5 * np.stack(
        [m[..., 2, 1] - m[..., 1, 2], m[..., 0, 2] - m[..., 2, 0], m[..., 1, 0] - m[..., 0, 1]],
        axis=-1,
    )


def sigma(v):
    v = np.asarray(v, dtype=float)
    x, y, z = np.moveaxis(v, -1, 0)
    out = np.empty(v.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = 1j * x
    out[..., 0, 1] = -y + 1j * z
    out[..., 1, 0] = y + 1j * z
    out[..., 1, 1] = -1j * x
    return out


def sigma_inv(x, cfg=DEFAULT_TOL):
    x = np.asarray(x, dtype=complex)
    if x.shape[-2:] != (2, 2):
        raise NotInAlgebra(f"expected a 2x2 matrix, got shape {x.shape}")
    herm = np.max(np.abs(x + np.conj(np.swapaxes(x, -1, -2))))
    tr = np.max(np.abs(x[..., 0, 0] + x[..., 1, 1]))
    scale = max(1.0, float(np.max(np.abs(x))))
    if herm > cfg.eps_sym * scale or tr > cfg.eps_sym * scale:
        raise NotInAlgebra("matrix is not traceless anti-Hermitian")
    return np.stack([x[..., 0, 0].imag, x[..., 1, 0].real, x[..., 1, 0].imag], axis=-1)


def _su2_matrix(q):
    q = np.asarray(q, dtype=float)
    return q[..., 0, None, None] * np.eye(2) + sigma(q[..., 1:])


def _su2_quat(u):
    return np.stack([u[..., 0, 0].real, u[..., 0, 0].imag, u[..., 1, 0].real, u[..., 1, 0].imag], axis=-1)


@dataclass(frozen=True)
class SU2Element:
    quaternion: tuple

    def __post_init__(self):
        q = tuple(float(c) for c in self.quaternion)
        if len(q) != 4 or abs(sum(c * c for c in q) - 1.0) > 1e-12:
            raise ValueError(f"not a unit quaternion: {self.quaternion!r}")
        object.__setattr__(self, "quaternion", q)

    @classmethod
    def identity(cls):
        return cls((1.0, 0.0, 0.0, 0.0))

    @classmethod
    def from_matrix(cls, u):
        return cls(tuple(_su2_quat(np.asarray(u, dtype=complex))))

    @classmethod
    def normalized(cls, q):
        q = np.asarray(q, dtype=float)
        return cls(tuple(q / np.linalg.norm(q)))

    def matrix(self):
        return _su2_matrix(self.quaternion)

    def inverse(self):
        w, x, y, z = self.quaternion
        return SU2Element((w, -x, -y, -z))

    def __mul__(self, other):
        return SU2Element.normalized(_su2_quat(self.matrix() @ other.matrix()))

    def __neg__(self):
        return SU2Element(tuple(-c for c in self.quaternion))

    def adjoint(self, v):
        """Ad_a on sigma-coordinates."""
        return covering_rho(self) @ np.asarray(v, dtype=float)


@dataclass(frozen=True)
class U1Element:
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)

    def __mul__(self, other):
        return U1Element(self.theta + other.theta)


def _angle(h):
    return h.theta if isinstance(h, U1Element) else float(h) % TWO_PI


def covering_rho_quat(q):
    """Vectorized double cover: quaternions (..., 4) to rotations (..., 3, 3).

    Column i is sigma_inv(a sigma(e_i) a^-1); no closed-form quaternion
    formula is used.
    """
    u = _su2_matrix(q)
    u_inv = np.conj(np.swapaxes(u, -1, -2))
    basis = sigma(np.eye(3))
    conj = u[..., None, :, :] @ basis @ u_inv[..., None, :, :]
    cols = np.stack([conj[..., 0, 0].imag, conj[..., 1, 0].real, conj[..., 1, 0].imag], axis=-1)
    return np.swapaxes(cols, -1, -2)


def covering_rho(a):
    q = a.quaternion if isinstance(a, SU2Element) else a
    return covering_rho_quat(q)


def commutator(x, y):
    return x @ y - y @ x


def rho_star(u):
    """Differential of the cover, sigma-coordinates in, so(3) matrix out."""
    u = np.asarray(u, dtype=float)
    su = sigma(u)[..., None, :, :]
    basis = sigma(np.eye(3))
    cols = sigma_inv(su @ basis - basis @ su)
    return np.swapaxes(cols, -1, -2)


def exp_su2(u, t=1.0):
    """exp(t sigma(u)) as an SU2Element (sigma(u)^2 = -|u|^2 I)."""
    u = np.asarray(u, dtype=float)
    r = float(np.linalg.norm(u))
    if r == 0.0:
        return SU2Element.identity()
    axis = u / r
    return SU2Element.normalized(np.concatenate([[math.cos(t * r)], math.sin(t * r) * axis]))


def x_rotation(theta):
    """Rotation about the x axis; acts on the (y, z) plane."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def mu_n(n, h):
    """The lift U(1) -> SU(2), e^{i theta} -> diag(e^{-i n theta}, e^{i n theta})."""
    angle = (int(n) * _angle(h)) % TWO_PI
    return SU2Element((math.cos(angle), -math.sin(angle), 0.0, 0.0))


def lambda_axial(sign, h):
    """Isotropy homomorphism U(1) -> SO(3) for sign '+' or '-'."""
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    theta = _angle(h)
    return x_rotation(theta if sign == "+" else -theta)


WEYL = SU2Element((0.0, 0.0, 1.0, 0.0))


def lifts_conjugate(n, m):
    """Whether mu_n and mu_m are conjugate in SU(2).

    Returns ``(flag, witness)``; the Weyl element sigma(e_2) carries mu_n to
    mu_{-n}, so the answer is ``|n| == |m|``.
    """
    if n == m:
        return True, SU2Element.identity()
    if n == -m:
        return True, WEYL
    return False, None
