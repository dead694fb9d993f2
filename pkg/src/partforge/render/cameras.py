"""Orbital camera rigs for annotation and filtering renders."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class RigMode(Enum):
    ANNOTATE14 = "annotate14"
    FILTER8 = "filter8"


_AZIMUTH_NAMES = {
    0: "front",
    45: "front_right",
    90: "right",
    135: "back_right",
    180: "back",
    225: "back_left",
    270: "left",
    315: "front_left",
}


@dataclass(frozen=True)
class Camera:
    name: str
    position: np.ndarray
    look_at: np.ndarray = field(default_factory=lambda: np.zeros(3))
    up: np.ndarray = field(default_factory=lambda: np.array([0.0, 1.0, 0.0]))
    vertical_fov: float = 40.0
    image_size: int = 768

    def __post_init__(self):
        position = np.asarray(self.position, dtype=np.float64).reshape(3)
        look_at = np.asarray(self.look_at, dtype=np.float64).reshape(3)
        up = np.asarray(self.up, dtype=np.float64).reshape(3)
        view = look_at - position
        if np.linalg.norm(view) < 1e-12:
            raise ValueError("camera position coincides with look_at")
        cross = np.cross(view / np.linalg.norm(view), up / np.linalg.norm(up))
        if np.linalg.norm(cross) < 1e-9:
            raise ValueError("up vector is parallel to the view direction")
        for arr in (position, look_at, up):
            arr.setflags(write=False)
        object.__setattr__(self, "position", position)
        object.__setattr__(self, "look_at", look_at)
        object.__setattr__(self, "up", up)

    def basis(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Right, up, forward unit vectors of the camera frame."""
        forward = self.look_at - self.position
        forward = forward / np.linalg.norm(forward)
        right = np.cross(forward, self.up)
        right = right / np.linalg.norm(right)
        true_up = np.cross(right, forward)
        return right, true_up, forward


def _orbital(name: str, azimuth_deg: float, elevation_deg: float, radius: float, image_size: int, fov: float) -> Camera:
    az = np.deg2rad(azimuth_deg)
    el = np.deg2rad(elevation_deg)
    position = radius * np.array([np.cos(el) * np.sin(az), np.sin(el), np.cos(el) * np.cos(az)])
    up = np.array([0.0, 1.0, 0.0]) if abs(elevation_deg) < 80 else np.array([0.0, 0.0, 1.0])
    return Camera(
        name=name,
        position=position,
        look_at=np.zeros(3),
        up=up,
        vertical_fov=fov,
        image_size=image_size,
    )


def build_camera_rig(
    mode: RigMode, radius: float = 3.2, image_size: int = 768, vertical_fov: float = 40.0
) -> list[Camera]:
    """Deterministic orbital viewpoints, all looking at the origin.

    ANNOTATE14: eight views at +25 deg elevation every 45 deg of azimuth,
    four at -20 deg every 90 deg, a top view, and a steep front view.
    FILTER8 is the eight +25 deg views.
    """
    if radius <= np.sqrt(3.0):
        raise ValueError("rig radius must exceed the unit-box bounding radius")
    ring = [
        _orbital(f"{_AZIMUTH_NAMES[az]}_tilt", az, 25.0, radius, image_size, vertical_fov)
        for az in range(0, 360, 45)
    ]
    if mode is RigMode.FILTER8:
        return ring
    lower = [
        _orbital(f"{_AZIMUTH_NAMES[az]}_tilt_down", az, -20.0, radius, image_size, vertical_fov)
        for az in range(0, 360, 90)
    ]
    top = _orbital("top", 0.0, 90.0, radius, image_size, vertical_fov)
    steep = _orbital("front_tilt_top", 0.0, 55.0, radius, image_size, vertical_fov)
    return ring + lower + [top, steep]


def annotate_view_order(radius: float = 3.2, image_size: int = 768) -> list[str]:
    return [c.name for c in build_camera_rig(RigMode.ANNOTATE14, radius, image_size)]
