"""Minimum-link path planning toolkit over exact rational arithmetic."""

from .geom import (Rational, Point2, Segment2, pt, seg, rat, orientation,
                   segments_cross, line_line_intersection, project_through,
                   bit_size, path_bit_size,
                   ParallelLines, RayParallel, BackwardProjection)
from .model import (Point3, pt3, PolygonalDomain, Terrain, Feature, Region,
                    PolyPath, VisGraph, validate_domain, validate_terrain,
                    contains_point, verify_path, ValidationError)
from .visibility import (visible, visibility_region, illuminate,
                         illuminate_boundary, weak_visible,
                         k_link_weak_visible, ResourceLimit)

__all__ = [
    "Rational", "Point2", "Segment2", "pt", "seg", "rat", "orientation",
    "segments_cross", "line_line_intersection", "project_through",
    "bit_size", "path_bit_size", "ParallelLines", "RayParallel",
    "BackwardProjection", "Point3", "pt3", "PolygonalDomain", "Terrain",
    "Feature", "Region", "PolyPath", "VisGraph", "validate_domain",
    "validate_terrain", "contains_point", "verify_path", "ValidationError",
    "visible", "visibility_region", "illuminate", "illuminate_boundary",
    "weak_visible", "k_link_weak_visible", "ResourceLimit",
]
