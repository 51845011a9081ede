"""Motzkin-path decompositions of moment functionals in noncommutative probability.

Submodules:

``words``       reduced and general Motzkin words, their lattice and splittings
``partitions``  noncrossing partitions and the adapted lattices ``M(w)``
``algebra``     moment tables, polynomial elements and boolean cumulants
``engine``      exact evaluation of ``ψ(w)`` and the free/boolean product sums
``replica``     truncated tensor-product oracle for the replica space
"""

from .algebra import AlgebraSpec, Element, boolean_cumulant, moment, parse_polynomial
from .engine import (
    AlgebraSystem,
    boolean_product_moment,
    cumulant_B_of_word,
    free_product_moment,
    free_product_oracle,
    psi,
)
from .partitions import (
    AdaptedPartition,
    SetPartition,
    adapt,
    catalan_decomposition,
    enumerate_adapted,
    enumerate_nc,
    filter_by_label,
    join_adapted,
)
from .words import (
    EMPTY,
    MotzkinWord,
    compare,
    enumerate_reduced,
    motzkin_count,
    parse_word,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "EMPTY",
    "AdaptedPartition",
    "AlgebraSpec",
    "AlgebraSystem",
    "Element",
    "MotzkinWord",
    "SetPartition",
    "adapt",
    "boolean_cumulant",
    "boolean_product_moment",
    "catalan_decomposition",
    "compare",
    "cumulant_B_of_word",
    "enumerate_adapted",
    "enumerate_nc",
    "enumerate_reduced",
    "filter_by_label",
    "free_product_moment",
    "free_product_oracle",
    "join_adapted",
    "moment",
    "motzkin_count",
    "parse_polynomial",
    "parse_word",
    "psi",
    "validate",
]
