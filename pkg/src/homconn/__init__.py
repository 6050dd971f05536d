"""Gauge classes of invariant SO(3) and SU(2) connections over 3-dimensional coset spaces.

Submodules:

``numerics``  3x3 eigensolver, PSD square root, invariants, Procrustes, sampling
``lie``       hat / sigma identifications, SU(2) -> SO(3) cover, isotropy maps
``wang``      equivariance constraints and their solution spaces
``moduli``    canonical forms, global chart, strata, axial and isotropic moduli
``cli``       JSON command line interface (``homconn`` / ``python -m homconn``)
"""

from .errors import (
    DomainError,
    HomConnError,
    InvalidLift,
    NoConvergence,
    NonAntisymmetric,
    NonFinite,
    NonSymmetric,
    NotEquivariant,
    NotInAlgebra,
    NotInSolutionSpace,
    NotSymmetric,
    NotTraceless,
    SuiteFailure,
)
from .lie import (
    SU2Element,
    U1Element,
    covering_rho,
    exp_su2,
    hat,
    lambda_axial,
    lifts_conjugate,
    mu_n,
    rho_star,
    sigma,
    sigma_inv,
    unhat,
    x_rotation,
)
from .moduli import (
    AxialModulus,
    AxialSU2Modulus,
    BianchiCanonical,
    ChartPoint,
    Stratum,
    axial_canonical,
    axial_coefficients,
    axial_gauge,
    axial_matrix,
    axial_representative,
    axial_su2_modulus,
    bianchi_canonical,
    bianchi_chart,
    bianchi_chart_inv,
    bianchi_equiv,
    classify_stratum,
    iso_modulus,
    iso_su2_modulus,
    su2_to_so3_class,
    verify_s1_sextic,
)
from .numerics import (
    DEFAULT_TOL,
    CharInvariants,
    EigenSystem,
    ToleranceConfig,
    char_invariants,
    numeric_rank,
    procrustes_align,
    psd_sqrt_factor,
    sample,
    sample_array,
    sym_eigen,
)
from .wang import (
    AXIAL_MINUS,
    AXIAL_PLUS,
    BIANCHI,
    ISOTROPIC,
    METRIC,
    EquivariantBasis,
    IsotropyClass,
    LiftSpec,
    WangParameter,
    dimension_table,
    equivariance_residual,
    solve_equivariant_basis,
    su2_lift,
)

__version__ = "0.1.0"
