"""Deterministic part color palette with guaranteed CIE-Lab separation."""

from __future__ import annotations

import colorsys
from functools import lru_cache

import numpy as np

MAX_PARTS = 32
MIN_LAB_DISTANCE = 25.0


def srgb_to_lab(rgb: np.ndarray) -> np.ndarray:
    """sRGB (0..255 or 0..1) to CIE-Lab under D65."""
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.max() > 1.0:
        rgb = rgb / 255.0
    linear = np.where(rgb <= 0.04045, rgb / 12.92, ((rgb + 0.055) / 1.055) ** 2.4)
    m = np.array(
        [
            [0.4124564, 0.3575761, 0.1804375],
            [0.2126729, 0.7151522, 0.0721750],
            [0.0193339, 0.1191920, 0.9503041],
        ]
    )
    xyz = linear @ m.T
    white = np.array([0.95047, 1.0, 1.08883])
    t = xyz / white
    f = np.where(t > (6 / 29) ** 3, np.cbrt(t), t / (3 * (6 / 29) ** 2) + 4 / 29)
    lab = np.empty_like(f)
    lab[..., 0] = 116 * f[..., 1] - 16
    lab[..., 1] = 500 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200 * (f[..., 1] - f[..., 2])
    return lab


def lab_distance_matrix(colors: np.ndarray) -> np.ndarray:
    lab = srgb_to_lab(colors)
    diff = lab[:, None, :] - lab[None, :, :]
    return np.sqrt((diff**2).sum(-1))


def _candidate_colors() -> np.ndarray:
    """Vivid HSV ring sampled over several saturation/value tiers."""
    colors = []
    for v in (0.95, 0.65, 0.40):
        for s in (0.9, 0.55):
            for h in range(0, 360, 3):
                r, g, b = colorsys.hsv_to_rgb(h / 360.0, s, v)
                colors.append((round(r * 255), round(g * 255), round(b * 255)))
    colors += [(255, 255, 255), (0, 0, 0), (128, 128, 128)]
    return np.array(sorted(set(colors)), dtype=np.float64)


@lru_cache(maxsize=1)
def _full_palette() -> np.ndarray:
    """Greedy max-min selection of 32 colors in Lab space.

    Starts from saturated red; each pick maximizes the minimum Lab
    distance to all previous picks, so the Lab-separation floor of the
    whole palette is as large as greedy selection allows.
    """
    candidates = _candidate_colors()
    lab = srgb_to_lab(candidates)
    start = int(np.argmin(np.abs(candidates - np.array([255.0, 26.0, 26.0])).sum(axis=1)))
    chosen = [start]
    min_d = np.linalg.norm(lab - lab[start], axis=1)
    for _ in range(MAX_PARTS - 1):
        nxt = int(np.argmax(min_d))
        chosen.append(nxt)
        min_d = np.minimum(min_d, np.linalg.norm(lab - lab[nxt], axis=1))
    palette = candidates[chosen].astype(np.uint8)
    palette.setflags(write=False)
    return palette


def build_palette(n_parts: int) -> np.ndarray:
    """First n rows of the cached 32-color palette, shape (n, 3) uint8."""
    if not 1 <= n_parts <= MAX_PARTS:
        raise ValueError(f"palette supports 1..{MAX_PARTS} parts, got {n_parts}")
    return _full_palette()[:n_parts]
