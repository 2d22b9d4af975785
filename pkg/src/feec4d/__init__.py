"""Exact polynomial differential forms, conforming spaces and dofs on the
reference pentatope and tetrahedral prism."""

from .formcalc import FormPoly, dform, from_proxy, koszul, upsilon
from .pentatope import b_matrices, bubble_basis_T4, build_space_T4, dofs_T4, exactness_T4, unisolvency_T4
from .polycore import Polynomial, Rational
from .refgeom import make_map, make_refcell, pullback, shape_functions
from .space import PolySpace
from .tetprism import (block3d, bubble_basis_W4, dofs_W4, exactness_W4, nrt_space_W4, tensor_space_W4,
                       unisolvency_W4)
from .tracedof import trace

__all__ = [
    "FormPoly", "Polynomial", "PolySpace", "Rational",
    "b_matrices", "block3d", "bubble_basis_T4", "bubble_basis_W4", "build_space_T4", "dform", "dofs_T4",
    "dofs_W4", "exactness_T4", "exactness_W4", "from_proxy", "koszul", "make_map", "make_refcell",
    "nrt_space_W4", "pullback", "shape_functions", "tensor_space_W4", "trace", "unisolvency_T4",
    "unisolvency_W4", "upsilon",
]
