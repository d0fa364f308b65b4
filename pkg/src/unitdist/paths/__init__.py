"""Constructive unit-step paths and diameter bounds."""

from .boxes import (DiameterBound, best_split, box_reach, diagonal_reach, face_reach, hypercube_bound,
                    hypercube_path, hyperrectangle_bound, hyperrectangle_path, rectangle2d_path,
                    rectangle_bound)
from .convex import REASONS, ConnectivityVerdict, ConvexReacher, convex_path, find_path, is_connected, scale_lift
from .planar import BaseReach, Frame2D, Region2D, rectangle_wiggle_bound, rectangle_wiggle_path, triangle_wiggle_path, wiggle_advance
from .simplex import CoreReacher, RadiusGraph, obtuse_triangle_path, radius_graph, simplex_path, simplex_reacher
from .steppath import PathError, StepPath, join_at_center

__all__ = [
    "BaseReach", "ConnectivityVerdict", "ConvexReacher", "CoreReacher", "DiameterBound", "Frame2D",
    "PathError", "REASONS", "RadiusGraph", "Region2D", "StepPath", "best_split", "box_reach",
    "convex_path", "diagonal_reach", "face_reach", "find_path", "hypercube_bound", "hypercube_path",
    "hyperrectangle_bound", "hyperrectangle_path", "is_connected", "join_at_center",
    "obtuse_triangle_path", "radius_graph", "rectangle2d_path", "rectangle_bound",
    "rectangle_wiggle_bound", "rectangle_wiggle_path", "scale_lift", "simplex_path", "simplex_reacher",
    "triangle_wiggle_path", "wiggle_advance",
]
