"""Exact Minkowski volume and surface tensors of convex polytopes."""

__version__ = "0.1.0"

from .adjoint import SurfaceAdjoint, VanishingCertificate, adjoint, check_vanishing, gf_denominator, surface_adjoint
from .algebra import ExactScalar, LinearForm, SparsePoly, omega, poly_derivative, truncated_series
from .errors import PolyminkError, ValidationError
from .moments import simplex_moment
from .oracle import definitional_surface_tensor, moment_gf_series, triangulation_independence
from .polytope import AffineSubspace, Polytope, fan_triangulation, nonface_subspaces, validate
from .tensor import (
    BigradedTensor,
    c_coefficient,
    derivative_extraction,
    e_elem,
    gf_series_check,
    multiset_partitions,
    surface_tensor,
    volume_tensor,
)

__all__ = [
    "AffineSubspace",
    "BigradedTensor",
    "ExactScalar",
    "LinearForm",
    "Polytope",
    "PolyminkError",
    "SparsePoly",
    "SurfaceAdjoint",
    "ValidationError",
    "VanishingCertificate",
    "adjoint",
    "c_coefficient",
    "check_vanishing",
    "definitional_surface_tensor",
    "derivative_extraction",
    "e_elem",
    "fan_triangulation",
    "gf_denominator",
    "gf_series_check",
    "moment_gf_series",
    "multiset_partitions",
    "nonface_subspaces",
    "omega",
    "poly_derivative",
    "simplex_moment",
    "surface_adjoint",
    "surface_tensor",
    "triangulation_independence",
    "truncated_series",
    "validate",
    "volume_tensor",
]
