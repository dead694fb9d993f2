"""Paired set-of-mark rendering: textured-with-contours + part-colored views.

Marker numbers are 1-based part indices in asset part order; the marker,
the contour on the textured render, and the solid fill in the colored
render all use the same palette color per part.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from ..assets import MultiPartAsset
from ..errors import EmptyRenderError
from .cameras import Camera, RigMode, build_camera_rig
from .markers import boundary_mask, draw_marker, part_contour_mask, place_marker
from .palette import build_palette
from .raster import RenderStyle, rasterize, render_gbuffer, shade_part_colored, shade_textured

COLORED_CONTOUR_RGB = (40, 40, 40)
MIN_PARTS = 2
MAX_PARTS = 32


@dataclass(frozen=True)
class RenderPair:
    """One viewpoint's paired renders.

    visible_part_ids holds 1-based marker numbers; id_buffer holds 0-based
    part indices with -1 for background.
    """

    view_name: str
    textured_image: np.ndarray
    colored_image: np.ndarray
    id_buffer: np.ndarray
    visible_part_ids: frozenset[int]


def _marker_positions(id_buffer: np.ndarray, n_parts: int) -> dict[int, tuple[int, int]]:
    out = {}
    for index in range(n_parts):
        pos = place_marker(id_buffer, index)
        if pos is not None:
            out[index] = pos
    return out


def render_pair(
    asset: MultiPartAsset, camera: Camera, marker_radius: int = 14
) -> RenderPair:
    palette = build_palette(asset.n_parts)
    gbuffer = render_gbuffer(asset, camera)
    id_buffer = gbuffer.part_id
    if not (id_buffer >= 0).any():
        raise EmptyRenderError(f"no pixel covered from view {camera.name!r}")

    textured = shade_textured(gbuffer)
    colored = shade_part_colored(gbuffer, palette)

    # Per-part contours in the part color on the textured render; a single
    # dark contour on the colored render.
    for index in gbuffer.visible_part_indices:
        contour = part_contour_mask(id_buffer, int(index))
        textured[contour, :3] = palette[int(index)]
    colored[boundary_mask(id_buffer), :3] = COLORED_CONTOUR_RGB

    markers = _marker_positions(id_buffer, asset.n_parts)
    for index, pos in sorted(markers.items()):
        for image in (textured, colored):
            draw_marker(image, pos, index + 1, palette[index], radius=marker_radius)

    return RenderPair(
        view_name=camera.name,
        textured_image=textured,
        colored_image=colored,
        id_buffer=id_buffer,
        visible_part_ids=frozenset(int(i) + 1 for i in markers),
    )


def render_som_pairs(
    asset: MultiPartAsset,
    radius: float = 3.2,
    image_size: int = 768,
    marker_radius: int = 14,
) -> list[RenderPair]:
    """Render the full 14-view annotation rig for a normalized asset."""
    if not MIN_PARTS <= asset.n_parts <= MAX_PARTS:
        raise ValueError(
            f"set-of-mark rendering expects {MIN_PARTS}..{MAX_PARTS} parts, got {asset.n_parts}"
        )
    rig = build_camera_rig(RigMode.ANNOTATE14, radius=radius, image_size=image_size)
    return [render_pair(asset, camera, marker_radius) for camera in rig]


def render_filter_views(
    asset: MultiPartAsset, radius: float = 3.2, image_size: int = 768
) -> list[tuple[str, np.ndarray]]:
    """Plain textured renders from the 8-view filtering rig."""
    rig = build_camera_rig(RigMode.FILTER8, radius=radius, image_size=image_size)
    views = []
    for camera in rig:
        image, _ = rasterize(asset, camera, RenderStyle.TEXTURED)
        views.append((camera.name, image))
    return views


def encode_png(image: np.ndarray) -> bytes:
    buf = io.BytesIO()
    Image.fromarray(image).save(buf, format="PNG", optimize=False)
    return buf.getvalue()


def save_render_pairs(
    pairs: list[RenderPair], directory: Path, save_id_buffer: bool = False
) -> list[Path]:
    """Write {view}_{textured|colored}.png files, returning written paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for pair in pairs:
        for suffix, image in (("textured", pair.textured_image), ("colored", pair.colored_image)):
            path = directory / f"{pair.view_name}_{suffix}.png"
            path.write_bytes(encode_png(image))
            written.append(path)
        if save_id_buffer:
            path = directory / f"{pair.view_name}_ids.png"
            ids = (pair.id_buffer.astype(np.int32) + 1).astype(np.uint16)
            Image.fromarray(ids, mode="I;16").save(path, format="PNG", optimize=False)
            written.append(path)
    return written
