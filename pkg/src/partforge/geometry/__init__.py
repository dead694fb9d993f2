from .transforms import (
    DegenerateFlag,
    NormalizationTransform,
    detect_degenerate,
    normalize_to_unit_box,
)
from .distance import ScalarGrid, compute_udf, mesh_distance, point_triangle_distance
from .isosurface import enclosed_volume, extract_level_set
from .manifold import ManifoldReport, check_manifold
from .sampling import StartRule, farthest_point_sample, sample_surface

__all__ = [
    "DegenerateFlag",
    "ManifoldReport",
    "NormalizationTransform",
    "ScalarGrid",
    "StartRule",
    "check_manifold",
    "compute_udf",
    "detect_degenerate",
    "enclosed_volume",
    "extract_level_set",
    "farthest_point_sample",
    "mesh_distance",
    "normalize_to_unit_box",
    "point_triangle_distance",
    "sample_surface",
]
