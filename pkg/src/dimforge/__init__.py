"""Exact K0-level verification of trace-scaling obstructions for AF algebras."""

from .dimgroup import DimElem, DimGroupParams, REFERENCE_PARAMS, make_elem, validate_params
from .exceptions import (
    BadModulus, CongruenceViolation, ContractViolation, DimforgeError, InvalidParams, NotAUnit,
    PerfectSquare,
)
from .orderauto import IntMat2, OrderAuto, ResidueClass, classify_residues, commutation_obstruction
from .quad import QuadRat, RingParams, canonicalize, parse_quad

__all__ = [
    "BadModulus", "CongruenceViolation", "ContractViolation", "DimElem", "DimGroupParams",
    "DimforgeError", "IntMat2", "InvalidParams", "NotAUnit", "OrderAuto", "REFERENCE_PARAMS",
    "PerfectSquare", "QuadRat", "ResidueClass", "RingParams", "canonicalize", "classify_residues",
    "commutation_obstruction", "make_elem", "parse_quad", "validate_params",
]
