"""Uniform normalization and degeneracy detection."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..assets import Mesh, MultiPartAsset, concat_parts
from ..errors import ZeroExtentError

# Area threshold in normalized units; below float noise for a unit-box mesh.
ZERO_AREA_EPS = 1e-10


class DegenerateFlag(Enum):
    EMPTY = "empty"
    ZERO_AREA = "zero_area"
    NAN_VERTICES = "nan_vertices"


@dataclass(frozen=True)
class NormalizationTransform:
    """Uniform scale about a center: p -> (p - center) * scale."""

    center: np.ndarray
    scale: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=np.float64).reshape(3)
        center.setflags(write=False)
        object.__setattr__(self, "center", center)
        if not (self.scale > 0):
            raise ValueError("scale must be positive")

    def apply(self, points: np.ndarray) -> np.ndarray:
        return (np.asarray(points, dtype=np.float64) - self.center) * self.scale

    def invert(self, points: np.ndarray) -> np.ndarray:
        return np.asarray(points, dtype=np.float64) / self.scale + self.center

    def apply_mesh(self, mesh: Mesh) -> Mesh:
        # Uniform scale + translation: normals and uvs are unaffected.
        return Mesh(
            vertices=self.apply(mesh.vertices),
            faces=mesh.faces,
            normals=mesh.normals,
            uvs=mesh.uvs,
            texture=mesh.texture,
        )


def normalize_to_unit_box(asset: MultiPartAsset) -> tuple[MultiPartAsset, NormalizationTransform]:
    """Apply one uniform transform so the whole asset fits [-1, 1]^3.

    The longest bounding-box axis maps to exactly [-1, 1]; every part gets
    the same transform so inter-part proportions are preserved.
    """
    combined = concat_parts(asset)
    if combined.n_vertices == 0:
        raise ZeroExtentError("asset has no vertices")
    lo, hi = combined.bounds()
    if not (np.isfinite(lo).all() and np.isfinite(hi).all()):
        raise ValueError("asset has non-finite coordinates")
    extent = float((hi - lo).max())
    if extent < 1e-12:
        raise ZeroExtentError("all vertices coincide")
    transform = NormalizationTransform(center=(lo + hi) / 2.0, scale=2.0 / extent)
    parts = {name: transform.apply_mesh(mesh) for name, mesh in asset.parts.items()}
    normalized = MultiPartAsset(
        asset_id=asset.asset_id,
        source=asset.source,
        parts=parts,
        global_caption=asset.global_caption,
    )
    return normalized, transform


def detect_degenerate(mesh: Mesh) -> set[DegenerateFlag]:
    """Flag empty, zero-area, or non-finite meshes.

    Area is measured after normalizing the mesh's own extent to the unit
    box so the threshold is scale independent.
    """
    flags: set[DegenerateFlag] = set()
    if mesh.n_faces == 0:
        flags.add(DegenerateFlag.EMPTY)
    if mesh.n_vertices and not np.isfinite(mesh.vertices).all():
        flags.add(DegenerateFlag.NAN_VERTICES)
        return flags
    if mesh.n_faces:
        lo, hi = mesh.bounds()
        extent = float((hi - lo).max())
        if extent < 1e-12:
            flags.add(DegenerateFlag.ZERO_AREA)
        else:
            scaled = Mesh(vertices=(mesh.vertices - lo) * (2.0 / extent), faces=mesh.faces)
            if scaled.surface_area() < ZERO_AREA_EPS:
                flags.add(DegenerateFlag.ZERO_AREA)
    return flags
