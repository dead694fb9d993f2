"""Procedurally generated multi-part sample assets."""

from __future__ import annotations

from .assets import AssetSource, MultiPartAsset
from .primitives import box, cylinder, icosphere


def toy_car() -> MultiPartAsset:
    """Five parts: four wheels then the body, so marks 1-4 are wheels."""
    wheels = {
        "front left wheel": (-0.6, 0.55),
        "front right wheel": (0.6, 0.55),
        "rear left wheel": (-0.6, -0.55),
        "rear right wheel": (0.6, -0.55),
    }
    parts = {
        name: icosphere(0.22, 1, center=(x, 0.22, z)) for name, (x, z) in wheels.items()
    }
    parts["body"] = box(size=(1.1, 0.5, 1.9), center=(0.0, 0.55, 0.0))
    return MultiPartAsset(
        asset_id="toy_car",
        source=AssetSource.SYNTHETIC,
        parts=parts,
        global_caption="a small toy car",
    )


def robot() -> MultiPartAsset:
    parts = {
        "head": icosphere(0.28, 1, center=(0.0, 1.45, 0.0)),
        "torso": box(size=(0.8, 1.0, 0.45), center=(0.0, 0.6, 0.0)),
        "left arm": cylinder(0.11, 0.85, 16, center=(-0.56, 0.62, 0.0)),
        "right arm": cylinder(0.11, 0.85, 16, center=(0.56, 0.62, 0.0)),
    }
    # Stand the arm cylinders upright (they are built along z).
    return MultiPartAsset(
        asset_id="robot",
        source=AssetSource.SYNTHETIC,
        parts=parts,
        global_caption="a simple humanoid robot",
    )


def table() -> MultiPartAsset:
    parts = {"tabletop": box(size=(1.6, 0.1, 1.0), center=(0.0, 0.75, 0.0))}
    for i, (x, z) in enumerate([(-0.7, -0.4), (0.7, -0.4), (-0.7, 0.4), (0.7, 0.4)]):
        parts[f"leg {i + 1}"] = box(size=(0.12, 0.7, 0.12), center=(x, 0.35, z))
    return MultiPartAsset(
        asset_id="table",
        source=AssetSource.SYNTHETIC,
        parts=parts,
        global_caption="a four-legged table",
    )


SAMPLE_BUILDERS = {
    "toy_car": toy_car,
    "robot": robot,
    "table": table,
}
