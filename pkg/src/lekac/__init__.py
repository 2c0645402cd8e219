"""Restricted odd Hamiltonian superalgebras le(n), lebar(n) over F_p and their
restricted Kac modules."""

from .field_linalg import CapacityError, Subspace, closure, rref, simultaneous_kernel
from .hamiltonian import LE, LEBAR, AlgebraTable, Weight, build_algebra
from .highest_weight import (
    NonuniquenessError,
    highest_weight_wrt,
    irreducible_quotient,
    is_irreducible,
    j_length,
    kac_module,
    restricted_verma,
    simple_head,
)
from .typicality import check_theorem, is_atypical, is_typical, predicted_length, predicted_shift

__version__ = "0.1.0"

__all__ = [
    "LE",
    "LEBAR",
    "AlgebraTable",
    "CapacityError",
    "NonuniquenessError",
    "Subspace",
    "Weight",
    "build_algebra",
    "check_theorem",
    "closure",
    "highest_weight_wrt",
    "irreducible_quotient",
    "is_atypical",
    "is_irreducible",
    "is_typical",
    "j_length",
    "kac_module",
    "predicted_length",
    "predicted_shift",
    "restricted_verma",
    "rref",
    "simple_head",
    "simultaneous_kernel",
]
