"""Connectivity of unit-distance graphs induced by closed convex sets."""

from .bodies import (Cone, Hyperrectangle, MebResult, Placed, Simplex, VPolytope, affine_dimension,
                     body_from_json, body_to_json, is_meb_by_seidel, is_well_centered, meb, radius,
                     scale_body)
from .geometry import DEFAULT_TOL, NoCrossingError, Tolerances
from .paths import (ConnectivityVerdict, DiameterBound, PathError, StepPath, convex_path, find_path,
                    hypercube_path, hyperrectangle_bound, hyperrectangle_path, is_connected,
                    obtuse_triangle_path, radius_graph, rectangle2d_path, rectangle_bound,
                    rectangle_wiggle_path, scale_lift, simplex_path, triangle_wiggle_path)

__version__ = "0.1.0"

__all__ = [
    "Cone", "ConnectivityVerdict", "DEFAULT_TOL", "DiameterBound", "Hyperrectangle", "MebResult",
    "NoCrossingError", "PathError", "Placed", "Simplex", "StepPath", "Tolerances", "VPolytope",
    "affine_dimension", "body_from_json", "body_to_json", "convex_path", "find_path", "hypercube_path",
    "hyperrectangle_bound", "hyperrectangle_path", "is_connected", "is_meb_by_seidel",
    "is_well_centered", "meb", "obtuse_triangle_path", "radius", "radius_graph", "rectangle2d_path",
    "rectangle_bound", "rectangle_wiggle_path", "scale_body", "scale_lift", "simplex_path",
    "triangle_wiggle_path",
]
