"""Deterministic software rasterizer with per-pixel part IDs.

Z-buffered perspective projection; no anti-aliasing anywhere so the
id buffer stays an exact partition and output bytes are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..assets import Mesh, MultiPartAsset
from ..errors import EmptyRenderError
from .cameras import Camera
from .palette import build_palette

AMBIENT = 0.35
BACKGROUND_RGBA = np.array([255, 255, 255, 255], dtype=np.uint8)


class RenderStyle(Enum):
    TEXTURED = "textured"
    PART_COLORED = "part_colored"


@dataclass
class GBuffer:
    """Per-pixel geometry attributes for one (asset, camera) pass."""

    part_id: np.ndarray  # int16, -1 where empty
    inv_depth: np.ndarray
    shade: np.ndarray  # Lambert factor in [0, 1]
    color: np.ndarray  # float base color (texture sample or flat), (S, S, 3)

    @property
    def visible_part_indices(self) -> np.ndarray:
        ids = np.unique(self.part_id)
        return ids[ids >= 0]


def _project(camera: Camera, vertices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    right, up, forward = camera.basis()
    rel = vertices - camera.position
    cam = np.stack([rel @ right, rel @ up, rel @ forward], axis=1)
    w = cam[:, 2]  # distance along the view axis, positive in front
    f = 1.0 / np.tan(np.deg2rad(camera.vertical_fov) / 2.0)
    size = camera.image_size
    safe_w = np.where(w > 1e-9, w, 1e-9)
    ndc_x = f * cam[:, 0] / safe_w
    ndc_y = f * cam[:, 1] / safe_w
    sx = (ndc_x + 1.0) * 0.5 * size
    sy = (1.0 - ndc_y) * 0.5 * size
    return np.stack([sx, sy], axis=1), w


def render_gbuffer(asset: MultiPartAsset, camera: Camera) -> GBuffer:
    size = camera.image_size
    part_id = np.full((size, size), -1, dtype=np.int16)
    inv_depth = np.zeros((size, size))
    shade = np.zeros((size, size))
    color = np.ones((size, size, 3))
    light = camera.position / np.linalg.norm(camera.position)
    near = 1e-3

    for index, mesh in enumerate(asset.meshes()):
        if mesh.n_faces == 0:
            continue
        screen, w = _project(camera, mesh.vertices)
        inv_w = 1.0 / w
        normals = mesh.face_normals()
        lambert = np.abs(normals @ light)
        flat = build_palette(min(asset.n_parts, 32))[index].astype(np.float64)
        textured = mesh.texture is not None and mesh.uvs is not None
        for fi, face in enumerate(mesh.faces):
            ws = w[face]
            if (ws <= near).any():
                continue  # behind the near plane; the rig keeps assets in front
            pts = screen[face]
            x0 = max(int(np.floor(pts[:, 0].min())), 0)
            x1 = min(int(np.ceil(pts[:, 0].max())) + 1, size)
            y0 = max(int(np.floor(pts[:, 1].min())), 0)
            y1 = min(int(np.ceil(pts[:, 1].max())) + 1, size)
            if x0 >= x1 or y0 >= y1:
                continue
            px, py = np.meshgrid(
                np.arange(x0, x1) + 0.5, np.arange(y0, y1) + 0.5, indexing="xy"
            )
            ax, ay = pts[0]
            bx, by = pts[1]
            cx, cy = pts[2]
            w0 = (cx - bx) * (py - by) - (cy - by) * (px - bx)
            w1 = (ax - cx) * (py - cy) - (ay - cy) * (px - cx)
            w2 = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
            area = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
            if area == 0:
                continue
            if area < 0:
                w0, w1, w2, area = -w0, -w1, -w2, -area
            inside = (w0 >= 0) & (w1 >= 0) & (w2 >= 0)
            if not inside.any():
                continue
            b0 = w0 / area
            b1 = w1 / area
            b2 = w2 / area
            zi = b0 * inv_w[face[0]] + b1 * inv_w[face[1]] + b2 * inv_w[face[2]]
            tile = (slice(y0, y1), slice(x0, x1))
            wins = inside & (zi > inv_depth[tile])
            if not wins.any():
                continue
            inv_depth[tile][wins] = zi[wins]
            part_id[tile][wins] = index
            shade[tile][wins] = lambert[fi]
            if textured:
                uvw = (
                    b0[..., None] * mesh.uvs[face[0]] * inv_w[face[0]]
                    + b1[..., None] * mesh.uvs[face[1]] * inv_w[face[1]]
                    + b2[..., None] * mesh.uvs[face[2]] * inv_w[face[2]]
                ) / zi[..., None]
                th, tw = mesh.texture.shape[:2]
                tx = np.clip((uvw[..., 0] * tw).astype(np.int64), 0, tw - 1)
                ty = np.clip(((1.0 - uvw[..., 1]) * th).astype(np.int64), 0, th - 1)
                texel = mesh.texture[ty, tx, :3].astype(np.float64)
                color[tile][wins] = texel[wins]
            else:
                color[tile][wins] = flat
    return GBuffer(part_id=part_id, inv_depth=inv_depth, shade=shade, color=color)


def shade_textured(gbuffer: GBuffer, mute: float = 0.55) -> np.ndarray:
    """Lambert-shaded base colors; flat colors are blended toward light
    gray so saturated contours and markers stay legible on top."""
    covered = gbuffer.part_id >= 0
    base = gbuffer.color * (1.0 - mute) + 235.0 * mute
    lit = base * (AMBIENT + (1.0 - AMBIENT) * gbuffer.shade[..., None])
    img = np.empty((*gbuffer.part_id.shape, 4), dtype=np.uint8)
    img[:] = BACKGROUND_RGBA
    img[covered, :3] = np.clip(np.rint(lit[covered]), 0, 255).astype(np.uint8)
    return img


def shade_part_colored(gbuffer: GBuffer, palette: np.ndarray) -> np.ndarray:
    covered = gbuffer.part_id >= 0
    img = np.empty((*gbuffer.part_id.shape, 4), dtype=np.uint8)
    img[:] = BACKGROUND_RGBA
    img[covered, :3] = palette[gbuffer.part_id[covered]]
    return img


def rasterize(
    asset: MultiPartAsset, camera: Camera, style: RenderStyle = RenderStyle.TEXTURED
) -> tuple[np.ndarray, np.ndarray]:
    """Render one view; returns (RGBA8 image, per-pixel part-index buffer).

    The id buffer holds the front-most part index per pixel (-1 where
    empty).  Raises EmptyRenderError when no pixel is covered, which
    signals a normalization or camera bug upstream.
    """
    gbuffer = render_gbuffer(asset, camera)
    if not (gbuffer.part_id >= 0).any():
        raise EmptyRenderError(f"no pixel covered from view {camera.name!r}")
    if style is RenderStyle.TEXTURED:
        image = shade_textured(gbuffer)
    else:
        image = shade_part_colored(gbuffer, build_palette(min(asset.n_parts, 32)))
    return image, gbuffer.part_id
