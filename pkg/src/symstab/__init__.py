"""Local unitary stabilizers of multiqubit mixed states and LU classification of symmetric states."""

from ._tol import (
    DEFAULT_TOL,
    MAX_QUBITS,
    BasisExpansionResidual,
    DegreeTooHigh,
    DimensionMismatch,
    HermiticityViolation,
    IllConditioned,
    NotClosed,
    NotNormalized,
    NotSymmetric,
    NumericalAbort,
    ParamOutOfRange,
    Rank2Anomaly,
    ResourceLimit,
    SymstabError,
    Tolerances,
    UnclassifiableDimension,
    ZeroClassUnsupported,
)
from .classify import (
    TAGS,
    CanonicalForm,
    Equivalence,
    StabilizerClass,
    canonical_form,
    check_diag_antidiag,
    classify,
    lu_equivalent,
    twin_rule,
)
from .pauli import (
    IX,
    IZ,
    LocalUnitary,
    PauliOperator,
    Unitary2,
    ad_action,
    conjugate,
    dense_to_pauli,
    eta_coeffs,
    exp_local,
    exp_su2,
    local_element,
    pauli_to_dense,
    zeta_coeffs,
)
from .stabilizer import (
    AlgebraBasis,
    BlockDecomposition,
    decompose_algebra,
    projection_dim,
    projection_dims,
    stabilizer_basis,
    verify_block_relations,
    weight,
)
from .sympoly import (
    Polynomial3,
    f_n,
    f_n_inv,
    homogeneous_irrep_dims,
    phi,
    poly_product,
    r_g,
    symmetrize,
    trivial_u1_dim,
)
from . import states

__version__ = "0.1.0"
