from .cameras import Camera, RigMode, build_camera_rig
from .palette import build_palette, lab_distance_matrix, srgb_to_lab
from .raster import RenderStyle, rasterize, render_gbuffer
from .markers import place_marker
from .som import RenderPair, render_filter_views, render_som_pairs, save_render_pairs

__all__ = [
    "Camera",
    "RenderPair",
    "RenderStyle",
    "RigMode",
    "build_camera_rig",
    "build_palette",
    "lab_distance_matrix",
    "place_marker",
    "rasterize",
    "render_filter_views",
    "render_gbuffer",
    "render_som_pairs",
    "save_render_pairs",
    "srgb_to_lab",
]
