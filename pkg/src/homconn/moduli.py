"""Gauge-orbit canonical forms and moduli coordinates.

Bianchi case (trivial isotropy).  Orbits of SO(3) acting on 3x3 matrices by
left multiplication are labelled by ``sgn(det M) * sqrt(M^T M)``: a positive
or negative semidefinite matrix, with P and -P identified when singular.
The semidefinite part is stored as ``p_psd`` together with a sign tag
``plus``, ``minus`` or ``boundary``.  The global chart sends it to
``(A, lam)`` with A traceless symmetric and ``lam`` the signed
smallest-modulus eigenvalue.

Batch versions (``*_arrays``) take stacks and encode the sign tag as
+1 / -1 / 0.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NonSymmetric, NotEquivariant, NotInSolutionSpace, NotTraceless
from .lie import rho_star, unhat, x_rotation
from .numerics import (
    DEFAULT_TOL,
    as_mat3,
    char_invariants_arrays,
    det3,
    polar_factors,
    spectral_norm,
    sym_eigvals,
)
from .wang import (
    AXIAL_PLUS,
    ISOTROPIC,
    METRIC,
    IsotropyClass,
    WangParameter,
    residual_witness,
    solve_equivariant_basis,
    su2_lift,
)

SIGN_NAMES = {1: "plus", -1: "minus", 0: "boundary"}
SIGN_CODES = {v: k for k, v in SIGN_NAMES.items()}
TRACE_TOL = 1e-10
EYE = np.eye(3)


def _scale(x):
    return np.maximum(1.0, x)


def _check_sym(a, cfg, name):
    asym = np.max(np.abs(a - np.swapaxes(a, -1, -2)))
    if asym > cfg.eps_sym * max(1.0, float(np.max(np.abs(a)))):
        raise NonSymmetric(f"{name} is not symmetric (max asymmetry {asym:.3e})")


@dataclass(frozen=True)
class BianchiCanonical:
    p_psd: np.ndarray
    sign: str

    def __post_init__(self):
        p = as_mat3(self.p_psd, "p_psd")
        if self.sign not in SIGN_CODES:
            raise ValueError(f"sign must be one of {sorted(SIGN_CODES)}, got {self.sign!r}")
        _check_sym(p, DEFAULT_TOL, "p_psd")
        object.__setattr__(self, "p_psd", p)

    def representative(self):
        """The semidefinite matrix on the signed cone (-p_psd for ``minus``)."""
        return -self.p_psd if self.sign == "minus" else self.p_psd.copy()


@dataclass(frozen=True)
class ChartPoint:
    a: np.ndarray
    lam: float

    def __post_init__(self):
        a = as_mat3(self.a, "A")
        _check_sym(a, DEFAULT_TOL, "A")
        tr = abs(float(np.trace(a)))
        if tr > TRACE_TOL * max(1.0, float(np.max(np.abs(a)))):
            raise NotTraceless(f"A must be traceless, trace = {tr:.3e}")
        lam = float(self.lam)
        if not np.isfinite(lam):
            raise ValueError("lambda must be finite")
        object.__setattr__(self, "a", 0.5 * (a + a.T))
        object.__setattr__(self, "lam", lam)

    def vector(self):
        return np.concatenate([self.a.reshape(9), [self.lam]])


@dataclass(frozen=True)
class Stratum:
    index: int
    discriminant: float = 0.0
    discriminant_s1: bool = False
    checks_agree: bool = True


@dataclass(frozen=True)
class AxialModulus:
    a: float
    r: float


@dataclass(frozen=True)
class AxialSU2Modulus:
    n: int
    c: float


# -- Bianchi: batch kernels ----------------------------------------------------


def canonical_arrays(m, cfg=DEFAULT_TOL):
    """Canonical forms of a stack of matrices: ``(p_psd, sign, sigma)``."""
    m = as_mat3(m)
    p, sigma, _ = polar_factors(m, cfg)
    smin, smax = sigma.min(axis=-1), sigma.max(axis=-1)
    boundary = smin <= cfg.eps_rank * _scale(smax)
    sign = np.where(boundary, 0, np.where(det3(m) > 0, 1, -1)).astype(np.int8)
    return p, sign, sigma


def chart_arrays(p, sign, cfg=DEFAULT_TOL, smallest=None):
    """Chart ``(A, lam)`` of canonical forms given as (p_psd, sign code)."""
    p = as_mat3(p)
    if smallest is None:
        smallest = sym_eigvals(p, cfg)[..., 0]
    a = p - (np.trace(p, axis1=-2, axis2=-1) / 3.0)[..., None, None] * EYE
    lam = np.where(sign == 0, 0.0, sign * smallest)
    return a, lam


def chart_of_matrices(m, cfg=DEFAULT_TOL):
    """Composite map from matrices straight to chart coordinates."""
    p, sign, sigma = canonical_arrays(m, cfg)
    return chart_arrays(p, sign, cfg, smallest=sigma.min(axis=-1))


def chart_inv_arrays(a, lam, cfg=DEFAULT_TOL):
    """Inverse chart on stacks: ``(p_psd, sign)``."""
    a = as_mat3(a)
    lam = np.asarray(lam, dtype=float)
    mu = sym_eigvals(a, cfg)
    mu_min = mu[..., 0]
    shift = np.where(lam >= 0, lam - mu_min, -(lam + mu_min))
    sgn = np.where(lam >= 0, 1.0, -1.0)
    p = a + shift[..., None, None] * EYE
    spread = mu[..., 2] - mu_min
    boundary = np.abs(lam) <= cfg.eps_rank * _scale(spread + np.abs(lam))
    sign = np.where(boundary, 0, sgn).astype(np.int8)
    return p, sign


def classify_arrays(a, lam, cfg=DEFAULT_TOL):
    """Minimal filtration index plus the discriminant cross-check.

    Returns ``(index, discriminant, discriminant_s1)``.  The spectral test
    decides; the discriminant 27 det^2 + 4 e2^3 is reported alongside.
    """
    a = as_mat3(a)
    lam = np.asarray(lam, dtype=float)
    mu = sym_eigvals(a, cfg)
    spread = mu[..., 2] - mu[..., 0]
    tol = cfg.eps_rank * _scale(spread + np.abs(lam))
    index = np.where(
        np.abs(lam) > tol,
        3,
        np.where(spread <= tol, 0, np.where(mu[..., 1] - mu[..., 0] <= tol, 1, 2)),
    )
    _, e2, det = char_invariants_arrays(a)
    norm = np.max(np.abs(mu), axis=-1)
    disc = 27.0 * det * det + 4.0 * e2 ** 3
    disc_s1 = (np.abs(disc) <= cfg.eps_rank * _scale(norm ** 6)) & (det >= -cfg.eps_rank * _scale(norm ** 3))
    return index, disc, disc_s1


def equiv_arrays(m, n, cfg=DEFAULT_TOL):
    am, lm = chart_of_matrices(m, cfg)
    an, ln = chart_of_matrices(n, cfg)
    diff = np.maximum(np.max(np.abs(am - an), axis=(-2, -1)), np.abs(lm - ln))
    scale = _scale(np.maximum(spectral_norm(m), spectral_norm(n)))
    return diff <= cfg.eps_eq * scale


# -- Bianchi: single-item API --------------------------------------------------


def bianchi_canonical(m, cfg=DEFAULT_TOL):
    p, sign, _ = canonical_arrays(as_mat3(m), cfg)
    return BianchiCanonical(p, SIGN_NAMES[int(sign)])


def bianchi_chart(c, cfg=DEFAULT_TOL):
    a, lam = chart_arrays(c.p_psd, np.int8(SIGN_CODES[c.sign]), cfg)
    return ChartPoint(a, float(lam))


def bianchi_chart_inv(p, cfg=DEFAULT_TOL):
    if not isinstance(p, ChartPoint):
        p = ChartPoint(*p)
    mat, sign = chart_inv_arrays(p.a, p.lam, cfg)
    return BianchiCanonical(mat, SIGN_NAMES[int(sign)])


def chart_plus(p, cfg=DEFAULT_TOL):
    """Chart on the positive cone: (P - tr(P)/3 I, smallest-modulus eigenvalue)."""
    p = as_mat3(p)
    ev = sym_eigvals(p, cfg)
    lam = 0.0 if ev[0] <= cfg.eps_rank * max(1.0, ev[2]) else float(ev[0])
    return ChartPoint(p - np.trace(p) / 3.0 * EYE, lam)


def chart_minus(n, cfg=DEFAULT_TOL):
    """Chart on the negative cone: (-N + tr(N)/3 I, smallest-modulus eigenvalue)."""
    n = as_mat3(n)
    ev = sym_eigvals(n, cfg)
    lam = 0.0 if -ev[2] <= cfg.eps_rank * max(1.0, -ev[0]) else float(ev[2])
    return ChartPoint(-n + np.trace(n) / 3.0 * EYE, lam)


def classify_stratum(p, cfg=DEFAULT_TOL):
    if not isinstance(p, ChartPoint):
        p = ChartPoint(*p)
    index, disc, disc_s1 = classify_arrays(p.a, p.lam, cfg)
    index = int(index)
    agree = True if index == 3 else bool(disc_s1) == (index <= 1)
    return Stratum(index, float(disc), bool(disc_s1), agree)


def bianchi_equiv(m, n, cfg=DEFAULT_TOL):
    return bool(equiv_arrays(as_mat3(m, "M"), as_mat3(n, "N"), cfg))


def su2_to_so3_class(lambda_su2):
    """Matrix of rho_* o Lambda, column by column through rho_star and unhat."""
    lam = as_mat3(lambda_su2)
    return np.stack([unhat(rho_star(lam[:, i])) for i in range(3)], axis=1)


# -- axial ---------------------------------------------------------------------


def axial_matrix(a, b, c):
    return np.array([[a, 0.0, 0.0], [0.0, b, -c], [0.0, c, b]], dtype=float)


def axial_coefficients(lam, cfg=DEFAULT_TOL):
    """Read (a, b, c) off a metric-compatible axial Lambda."""
    lam = as_mat3(lam)
    space = solve_equivariant_basis(AXIAL_PLUS, METRIC, cfg)
    dist = space.distance(lam)
    if dist > cfg.eps_eq * max(1.0, float(np.linalg.norm(lam))):
        raise NotInSolutionSpace(f"matrix is not of axial form (distance {dist:.3e})")
    return (
        float(lam[0, 0]),
        0.5 * float(lam[1, 1] + lam[2, 2]),
        0.5 * float(lam[2, 1] - lam[1, 2]),
    )


def axial_gauge(theta, lam):
    """Gauge action of the residual SO(2) by left multiplication."""
    return x_rotation(theta) @ np.asarray(lam, dtype=float)


def axial_canonical(a, b, c):
    return AxialModulus(float(a), float(np.hypot(b, c)))


def axial_representative(mod):
    return np.diag([mod.a, mod.r, mod.r])


def axial_su2_modulus(n, lam, sign="+", cfg=DEFAULT_TOL):
    lam = as_mat3(lam)
    space = solve_equivariant_basis(IsotropyClass("axial", sign), su2_lift(n), cfg)
    dist = space.distance(lam)
    if dist > cfg.eps_eq * max(1.0, float(np.linalg.norm(lam))):
        raise NotInSolutionSpace(f"Lambda is not an intertwiner for mu_{n} (distance {dist:.3e})")
    c = float(lam[0, 0]) if n != 0 else float(np.linalg.norm(lam[:, 0]))
    return AxialSU2Modulus(int(n), c)


# -- isotropic -----------------------------------------------------------------


def iso_modulus(lam, cfg=DEFAULT_TOL):
    lam = as_mat3(lam)
    tol = cfg.eps_eq * max(1.0, float(np.linalg.norm(lam)))
    residual, witness = residual_witness(WangParameter(lam, ISOTROPIC, METRIC))
    c = float(np.trace(lam)) / 3.0
    off = float(np.linalg.norm(lam - c * EYE))
    if residual > tol or off > tol:
        raise NotEquivariant(
            f"Lambda does not commute with SO(3) (residual {residual:.3e})", residual, witness
        )
    return c


def iso_su2_modulus(lam, cfg=DEFAULT_TOL):
    """The SU(2) moduli space here is a single point; only Lambda = 0 lies in it."""
    lam = as_mat3(lam)
    residual, witness = residual_witness(WangParameter(lam, ISOTROPIC, su2_lift(0)))
    if residual > cfg.eps_eq * max(1.0, float(np.linalg.norm(lam))):
        raise NotEquivariant(f"Lambda is not SO(3)-invariant (residual {residual:.3e})", residual, witness)
    return 0


# -- the sextic behind the rank-one stratum ------------------------------------

SEXTIC = (4, 12, -3, -26, -3, 12, 4)


def _polymul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _polyval(coeffs, t):
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * t + c
    return acc


def _polyder(coeffs):
    deg = len(coeffs) - 1
    return [c * (deg - i) for i, c in enumerate(coeffs[:-1])]


def sextic_expansion():
    """Integer coefficients (highest first) of 4 (t-1)^2 (t+2)^2 (t+1/2)^2."""
    out = [1]
    for factor in ([1, -1], [1, 2], [2, 1]):
        out = _polymul(out, _polymul(factor, factor))
    return tuple(out)


def verify_s1_sextic():
    if sextic_expansion() != SEXTIC:
        return False
    deriv = _polyder(SEXTIC)
    for root in (Fraction(1), Fraction(-2), Fraction(-1, 2)):
        if _polyval(SEXTIC, root) != 0 or _polyval(deriv, root) != 0:
            return False
    return True
