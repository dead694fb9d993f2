"""Marker placement and drawing for numbered part overlays."""

from __future__ import annotations

import numpy as np
from scipy.ndimage import distance_transform_edt

# Classic 5x7 digit glyphs, one byte per column, LSB = top row.
_DIGIT_COLUMNS = {
    "0": (0x3E, 0x51, 0x49, 0x45, 0x3E),
    "1": (0x00, 0x42, 0x7F, 0x40, 0x00),
    "2": (0x42, 0x61, 0x51, 0x49, 0x46),
    "3": (0x21, 0x41, 0x45, 0x4B, 0x31),
    "4": (0x18, 0x14, 0x12, 0x7F, 0x10),
    "5": (0x27, 0x45, 0x45, 0x45, 0x39),
    "6": (0x3C, 0x4A, 0x49, 0x49, 0x30),
    "7": (0x01, 0x71, 0x09, 0x05, 0x03),
    "8": (0x36, 0x49, 0x49, 0x49, 0x36),
    "9": (0x06, 0x49, 0x49, 0x29, 0x1E),
}

OUTLINE_RGB = (30, 30, 30)
NUMERAL_RGB = (255, 255, 255)


def place_marker(id_buffer: np.ndarray, part_index: int) -> tuple[int, int] | None:
    """Pixel of the part's mask farthest from the mask boundary.

    Returns (row, col) of the maximal distance-transform value, ties
    broken topmost then leftmost; None when the part covers no pixel.
    The image border counts as boundary.
    """
    mask = id_buffer == part_index
    if not mask.any():
        return None
    padded = np.zeros((mask.shape[0] + 2, mask.shape[1] + 2), dtype=bool)
    padded[1:-1, 1:-1] = mask
    dist = distance_transform_edt(padded)[1:-1, 1:-1]
    flat = int(np.argmax(dist))  # first occurrence in row-major order
    return flat // mask.shape[1], flat % mask.shape[1]


def _glyph_mask(text: str, scale: int) -> np.ndarray:
    cols = []
    for i, ch in enumerate(text):
        if i:
            cols.append(np.zeros(7, dtype=bool))
        byte_cols = _DIGIT_COLUMNS[ch]
        for byte in byte_cols:
            cols.append(np.array([(byte >> row) & 1 for row in range(7)], dtype=bool))
    glyph = np.stack(cols, axis=1)
    return np.kron(glyph, np.ones((scale, scale), dtype=bool))


def draw_marker(
    image: np.ndarray,
    center: tuple[int, int],
    number: int,
    color: np.ndarray,
    radius: int = 14,
) -> None:
    """Draw a filled circle in the part color with a dark 2-px outline and
    a white numeral, in place, without anti-aliasing."""
    h, w = image.shape[:2]
    row, col = center
    yy, xx = np.mgrid[max(0, row - radius) : min(h, row + radius + 1),
                      max(0, col - radius) : min(w, col + radius + 1)]
    d2 = (yy - row) ** 2 + (xx - col) ** 2
    disk = d2 <= radius * radius
    ring = disk & (d2 > (radius - 2) ** 2)
    image[yy[disk], xx[disk], :3] = np.asarray(color, dtype=np.uint8)
    image[yy[ring], xx[ring], :3] = OUTLINE_RGB
    if image.shape[2] == 4:
        image[yy[disk], xx[disk], 3] = 255

    text = str(number)
    glyph = _glyph_mask(text, scale=3 if len(text) == 1 else 2)
    gh, gw = glyph.shape
    top = row - gh // 2
    left = col - gw // 2
    ys, xs = np.nonzero(glyph)
    ys = ys + top
    xs = xs + left
    keep = (ys >= 0) & (ys < h) & (xs >= 0) & (xs < w)
    image[ys[keep], xs[keep], :3] = NUMERAL_RGB


def part_contour_mask(id_buffer: np.ndarray, part_index: int, width: int = 2) -> np.ndarray:
    """Pixels of the part within `width` px of its boundary (inner outline)."""
    mask = id_buffer == part_index
    if not mask.any():
        return mask
    padded = np.zeros((mask.shape[0] + 2, mask.shape[1] + 2), dtype=bool)
    padded[1:-1, 1:-1] = mask
    dist = distance_transform_edt(padded)[1:-1, 1:-1]
    return mask & (dist <= width)


def boundary_mask(id_buffer: np.ndarray) -> np.ndarray:
    """Pixels adjacent to a different part id or to the background."""
    padded = np.full(
        (id_buffer.shape[0] + 2, id_buffer.shape[1] + 2), -1, dtype=id_buffer.dtype
    )
    padded[1:-1, 1:-1] = id_buffer
    center = padded[1:-1, 1:-1]
    differs = np.zeros_like(center, dtype=bool)
    for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
        neighbor = padded[1 + dr : padded.shape[0] - 1 + dr, 1 + dc : padded.shape[1] - 1 + dc]
        differs |= neighbor != center
    return differs & (center >= 0)
