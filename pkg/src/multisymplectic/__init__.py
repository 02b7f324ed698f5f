"""Exact multisymplectic linear algebra over the rationals, with the G2 case."""

from __future__ import annotations

from .exterior import (
    AlternatingForm,
    Multivector,
    contract,
    decomposable,
    eval_form,
    is_decomposable2,
    wedge,
)
from .g2 import (
    G2ClassificationReport,
    G2Space,
    classify_g2_subspace,
    corollary_check,
    cross,
    find_associative_in,
    is_associative,
    is_coassociative,
    is_cross_closed,
    metric_from_phi,
    phi0,
)
from .linalg import Matrix, Subspace
from .spaces import (
    MultisymplecticSpace,
    Status,
    TypeIIComplement,
    Verdict,
    extend_to_lagrangian,
    fully_nondegenerate_on,
    r_nondegenerate,
    type_i_complement,
    type_ii_complement,
)

__all__ = [
    "AlternatingForm",
    "G2ClassificationReport",
    "G2Space",
    "Matrix",
    "Multivector",
    "MultisymplecticSpace",
    "Status",
    "Subspace",
    "TypeIIComplement",
    "Verdict",
    "classify_g2_subspace",
    "contract",
    "corollary_check",
    "cross",
    "decomposable",
    "eval_form",
    "extend_to_lagrangian",
    "find_associative_in",
    "fully_nondegenerate_on",
    "is_associative",
    "is_coassociative",
    "is_cross_closed",
    "is_decomposable2",
    "metric_from_phi",
    "phi0",
    "r_nondegenerate",
    "type_i_complement",
    "type_ii_complement",
    "wedge",
]
