"""Generalized inverses of matrices, exact or floating point, with residual certificates."""

from .certify import Certificate, certify, theorem23_witness
from .exceptions import (
    BackendMismatchError,
    NonIdempotentError,
    NotInvertibleError,
    NumericalError,
    RankAmbiguityError,
    SpectralSeparationError,
    TheoremViolation,
)
from .geninv import (
    InverseKind,
    MaryDiagnosis,
    drazin,
    drazin_index,
    dw_idempotents,
    group_inverse,
    inner_inverse,
    mary_diagnose,
    mary_inverse,
    moore_penrose,
    outer_prescribed,
    pq_inverse,
    reflexive_prescribed,
    theorem22_product,
)
from .linalg import (
    Projector,
    RankFactorization,
    Subspace,
    matrix_rank,
    nullspace_basis,
    projector_onto_along,
    range_basis,
    rank_factorize,
    subspace_contained,
    subspace_equal,
)
from .scalar import DEFAULT_POLICY, Backend, TolerancePolicy, as_exact, as_float
from .spectral import (
    Contour,
    SpectralSet,
    decompose_h0_core,
    koliha_drazin,
    mary_along_spectral,
    spectral_projection_contour,
    spectral_projection_schur,
    verify_koliha_poon_inclusion,
    verify_proposition_kd,
)

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "certify",
    "theorem23_witness",
    "BackendMismatchError",
    "NonIdempotentError",
    "NotInvertibleError",
    "NumericalError",
    "RankAmbiguityError",
    "SpectralSeparationError",
    "TheoremViolation",
    "InverseKind",
    "MaryDiagnosis",
    "drazin",
    "drazin_index",
    "dw_idempotents",
    "group_inverse",
    "inner_inverse",
    "mary_diagnose",
    "mary_inverse",
    "moore_penrose",
    "outer_prescribed",
    "pq_inverse",
    "reflexive_prescribed",
    "theorem22_product",
    "Projector",
    "RankFactorization",
    "Subspace",
    "matrix_rank",
    "nullspace_basis",
    "projector_onto_along",
    "range_basis",
    "rank_factorize",
    "subspace_contained",
    "subspace_equal",
    "DEFAULT_POLICY",
    "Backend",
    "TolerancePolicy",
    "as_exact",
    "as_float",
    "Contour",
    "SpectralSet",
    "decompose_h0_core",
    "koliha_drazin",
    "mary_along_spectral",
    "spectral_projection_contour",
    "spectral_projection_schur",
    "verify_koliha_poon_inclusion",
    "verify_proposition_kd",
]
