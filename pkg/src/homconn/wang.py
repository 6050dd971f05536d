"""Invariant connections as solutions of a linear equivariance constraint.

A connection is parametrized by a linear map ``Lambda`` on R^3 (the target
carried to so(3) by ``hat`` or to su(2) by ``sigma``).  For isotropy
representation ``lam`` and target action ``Ad`` it must satisfy

    Lambda @ lam(h) == Ad(h) @ Lambda    for every h in H.

The solution space is computed as the nullspace of the stacked constraints
on the 9 entries of ``Lambda``.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidLift
from .lie import U1Element, covering_rho, lambda_axial, mu_n, x_rotation
from .numerics import DEFAULT_TOL, as_mat3, sample_array

U1_GRID = 17
ISO_SAMPLES = 50
ISO_SEED = 20240517


@dataclass(frozen=True)
class IsotropyClass:
    kind: str  # "bianchi" | "axial" | "isotropic"
    sign: str = "+"

    def __post_init__(self):
        if self.kind not in ("bianchi", "axial", "isotropic"):
            raise ValueError(f"unknown isotropy class {self.kind!r}")
        if self.sign not in ("+", "-"):
            raise ValueError(f"sign must be '+' or '-', got {self.sign!r}")
        if self.kind != "axial":
            object.__setattr__(self, "sign", "+")

    def __str__(self):
        return f"axial{self.sign}" if self.kind == "axial" else self.kind


@dataclass(frozen=True)
class LiftSpec:
    flavor: str = "metric"  # "metric" | "su2"
    n: int = 0

    def __post_init__(self):
        if self.flavor not in ("metric", "su2"):
            raise ValueError(f"unknown lift flavor {self.flavor!r}")
        object.__setattr__(self, "n", int(self.n) if self.flavor == "su2" else 0)

    def __str__(self):
        return "metric" if self.flavor == "metric" else f"su2({self.n})"


BIANCHI = IsotropyClass("bianchi")
AXIAL_PLUS = IsotropyClass("axial", "+")
AXIAL_MINUS = IsotropyClass("axial", "-")
ISOTROPIC = IsotropyClass("isotropic")
METRIC = LiftSpec("metric")


def su2_lift(n):
    return LiftSpec("su2", n)


@dataclass(frozen=True)
class WangParameter:
    matrix: np.ndarray
    isotropy: IsotropyClass
    lift: LiftSpec = METRIC

    def residual(self):
        return equivariance_residual(self)


@dataclass(frozen=True)
class EquivariantBasis:
    isotropy: IsotropyClass
    lift: LiftSpec
    dimension: int
    basis: tuple

    def projector(self):
        """Orthogonal projector on the solution space, acting on row-major vec(Lambda)."""
        if not self.basis:
            return np.zeros((9, 9))
        b = np.stack([m.reshape(9) for m in self.basis], axis=1)
        return b @ b.T

    def project(self, m):
        return (self.projector() @ np.asarray(m, dtype=float).reshape(9)).reshape(3, 3)

    def distance(self, m):
        m = np.asarray(m, dtype=float)
        return float(np.linalg.norm(m - self.project(m)))


def check_lift(isotropy, lift):
    if lift.flavor == "su2" and lift.n != 0 and isotropy.kind in ("bianchi", "isotropic"):
        raise InvalidLift(
            f"{isotropy}: the only homomorphism into SU(2) is the trivial one, got n = {lift.n}"
        )


def u1_angles(lift):
    k = U1_GRID if abs(lift.n) <= 8 else 4 * abs(lift.n) + 3
    return [2.0 * math.pi * j / k for j in range(k)]


@lru_cache(maxsize=1)
def _iso_rotations():
    quarter = math.pi / 2
    gens = [
        x_rotation(quarter),
        np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]]),
        np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
    ]
    return tuple(gens + list(sample_array("rotation", ISO_SEED, ISO_SAMPLES)))


@lru_cache(maxsize=None)
def constraint_pairs(isotropy, lift):
    """Tuples ``(h, source, target)`` with ``source = lam(h)``, ``target = Ad(h)``."""
    check_lift(isotropy, lift)
    if isotropy.kind == "bianchi":
        return ()
    if isotropy.kind == "isotropic":
        return tuple(
            (r, r, r if lift.flavor == "metric" else np.eye(3)) for r in _iso_rotations()
        )
    pairs = []
    for theta in u1_angles(lift):
        h = U1Element(theta)
        src = lambda_axial(isotropy.sign, h)
        tgt = src if lift.flavor == "metric" else covering_rho(mu_n(lift.n, h))
        pairs.append((h, src, tgt))
    return tuple(pairs)


def residual_witness(p):
    """Worst constraint violation and the group element attaining it."""
    lam = as_mat3(p.matrix)
    worst, witness = 0.0, None
    for h, src, tgt in constraint_pairs(p.isotropy, p.lift):
        r = float(np.linalg.norm(lam @ src - tgt @ lam))
        if witness is None or r > worst:
            worst, witness = r, h
    return worst, witness


def equivariance_residual(p):
    return residual_witness(p)[0]


def constraint_matrix(isotropy, lift):
    """Stacked 9-column constraint operator on row-major vec(Lambda)."""
    eye = np.eye(3)
    blocks = [np.kron(eye, src.T) - np.kron(tgt, eye) for _, src, tgt in constraint_pairs(isotropy, lift)]
    return np.vstack(blocks) if blocks else np.zeros((0, 9))


def _tidy_basis(null, dim):
    """Deterministic orthonormal basis of span(null), built from projected unit matrices."""
    proj = null @ null.T
    chosen = []
    for k in range(9):
        v = proj[:, k].copy()
        for _ in range(2):
            for b in chosen:
                v -= (b @ v) * b
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            chosen.append(v / norm)
        if len(chosen) == dim:
            break
    return chosen


@lru_cache(maxsize=None)
def _solve(isotropy, lift, eps_rank):
    k = constraint_matrix(isotropy, lift)
    gram = k.T @ k
    values, vectors = np.linalg.eigh(gram)
    null = vectors[:, values <= eps_rank * max(float(values.max()), 0.0)]
    chosen = _tidy_basis(null, null.shape[1])
    basis = tuple(v.reshape(3, 3) for v in chosen)
    for m in basis:
        m.setflags(write=False)
    return EquivariantBasis(isotropy, lift, len(basis), basis)


def solve_equivariant_basis(isotropy, lift=METRIC, cfg=DEFAULT_TOL):
    check_lift(isotropy, lift)
    return _solve(isotropy, lift, cfg.eps_rank)


DISCREPANCY_NOTE = (
    "axial/su2(0): the trivial lift leaves the first column free (dimension 3), "
    "larger than the diag(c, 0, 0) family that every nonzero n produces"
)


def dimension_table(cfg=DEFAULT_TOL, ns=range(-3, 4)):
    """Solution-space dimensions for every supported (isotropy, lift) pair."""
    table = {
        ("bianchi", "metric"): solve_equivariant_basis(BIANCHI, METRIC, cfg).dimension,
        ("axial+", "metric"): solve_equivariant_basis(AXIAL_PLUS, METRIC, cfg).dimension,
        ("axial-", "metric"): solve_equivariant_basis(AXIAL_MINUS, METRIC, cfg).dimension,
        ("isotropic", "metric"): solve_equivariant_basis(ISOTROPIC, METRIC, cfg).dimension,
        ("isotropic", "su2(0)"): solve_equivariant_basis(ISOTROPIC, su2_lift(0), cfg).dimension,
    }
    for n in ns:
        for iso in (AXIAL_PLUS, AXIAL_MINUS):
            table[(str(iso), f"su2({n})")] = solve_equivariant_basis(iso, su2_lift(n), cfg).dimension
    return table
