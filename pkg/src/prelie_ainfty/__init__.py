"""Exact pre-Lie calculus on multilinear maps and obstructions to A-infinity structures."""

from .ainfty import ArStructure, check_ar, convert_convention, relation_defect
from .complexes import DgModule, GradedMap, MultiMap, dgmodule, graded_module, hom_complex, suspend, tensor
from .hochschild import GradedAlgebra, hh, is_coboundary
from .homology import homology, induced_map, lift_cycle_map, write_as_boundary
from .obstruction import extend_to_ainfty, lift_once, obstruction_cocycle
from .prelie import bracket, brace, circle, star, theta, theta_inv
from .scalars import GF, QQ, ZZ, RingSpec, Scalar

__version__ = "0.1.0"

__all__ = [
    "ArStructure", "DgModule", "GF", "GradedAlgebra", "GradedMap", "MultiMap", "QQ", "RingSpec", "Scalar", "ZZ",
    "brace", "bracket", "check_ar", "circle", "convert_convention", "dgmodule", "extend_to_ainfty",
    "graded_module", "hh", "hom_complex", "homology", "induced_map", "is_coboundary", "lift_cycle_map",
    "lift_once", "obstruction_cocycle", "relation_defect", "star", "suspend", "tensor", "theta", "theta_inv",
    "write_as_boundary",
]
