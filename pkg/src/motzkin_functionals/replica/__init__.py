"""Tensor-product realization of orthogonal replicas, used as a numerical oracle."""

from .checks import (
    KINDS,
    OrderExceedsTruncation,
    OrthogonalityReport,
    Realization,
    boolean_cumulant_via_p_perp,
    check_orthogonality,
    grouped_p_perp,
    independence_realization,
    projection_defects,
    random_model_element,
)
from .models import MatrixModel, ModelMismatch, exact_array, jacobi_model, p_perp_state
from .space import (
    ColorExceedsTruncation,
    DimensionBound,
    Operator,
    TruncatedReplicaSpace,
    build_space,
    default_truncation,
    psi_oracle,
)

__all__ = [
    "KINDS",
    "ColorExceedsTruncation",
    "DimensionBound",
    "MatrixModel",
    "ModelMismatch",
    "Operator",
    "OrderExceedsTruncation",
    "OrthogonalityReport",
    "Realization",
    "TruncatedReplicaSpace",
    "boolean_cumulant_via_p_perp",
    "build_space",
    "check_orthogonality",
    "default_truncation",
    "exact_array",
    "grouped_p_perp",
    "independence_realization",
    "jacobi_model",
    "p_perp_state",
    "projection_defects",
    "psi_oracle",
    "random_model_element",
]
