"""Unsigned distance fields over regular grids.

Distances are exact point-to-triangle-set distances.  A KD-tree over
triangle centroids proposes nearest candidates; a candidate minimum is
provably optimal when it beats the k-th centroid distance minus the
largest triangle circumradius, and points failing that bound fall back to
checking every triangle.  The hot per-pair kernel is JIT compiled with
numba when available; a pure-numpy path computes identical values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..assets import Mesh
from ..errors import DegenerateInputError
from .transforms import DegenerateFlag, detect_degenerate

try:
    from numba import njit, prange

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is normally present
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap

    prange = range

_CHUNK_PAIRS = 2_000_000  # point-triangle pairs per numpy block


@dataclass(frozen=True)
class ScalarGrid:
    """Cubic grid of unsigned distance samples, indexed values[ix, iy, iz]."""

    resolution: int
    origin: np.ndarray
    spacing: float
    values: np.ndarray

    def __post_init__(self):
        origin = np.asarray(self.origin, dtype=np.float64).reshape(3)
        values = np.asarray(self.values, dtype=np.float64)
        r = int(self.resolution)
        if r < 2:
            raise ValueError("resolution must be >= 2")
        if values.shape != (r, r, r):
            raise ValueError(f"values must be ({r},{r},{r}), got {values.shape}")
        if not np.isfinite(values).all():
            raise ValueError("grid values must be finite")
        if values.min() < 0:
            raise ValueError("unsigned distance values must be >= 0")
        if not (self.spacing > 0):
            raise ValueError("spacing must be positive")
        origin.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "resolution", r)

    def node_position(self, index: np.ndarray) -> np.ndarray:
        return self.origin + np.asarray(index, dtype=np.float64) * self.spacing


# --------------------------------------------------------------------------
# Pure-numpy kernel.  The closest point on a triangle is either the in-plane
# projection (when its barycentrics land inside) or lies on one of the three
# edges; the minimum over those candidates is branch-free and robust to
# degenerate triangles.  Kept as the reference path and used by the tests as
# an independent check of the compiled kernel.
# --------------------------------------------------------------------------


def _point_segment_sq(p: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    ab = b - a
    denom = (ab * ab).sum(-1)
    t = ((p - a) * ab).sum(-1) / np.where(denom > 0, denom, 1.0)
    t = np.clip(np.where(denom > 0, t, 0.0), 0.0, 1.0)
    closest = a + t[..., None] * ab
    d = p - closest
    return (d * d).sum(-1)


def point_triangle_distance_sq(points: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Exact squared distance for broadcastable points/triangles (numpy)."""
    a = triangles[..., 0, :]
    b = triangles[..., 1, :]
    c = triangles[..., 2, :]
    d2 = _point_segment_sq(points, a, b)
    d2 = np.minimum(d2, _point_segment_sq(points, b, c))
    d2 = np.minimum(d2, _point_segment_sq(points, a, c))

    ab = b - a
    ac = c - a
    ap = points - a
    n = np.cross(ab, ac)
    nn = (n * n).sum(-1)
    proj = (ap * n).sum(-1)
    w_v = (np.cross(ap, ac) * n).sum(-1)
    w_w = (np.cross(ab, ap) * n).sum(-1)
    inside = (w_v >= 0) & (w_w >= 0) & (w_v + w_w <= nn) & (nn > 0)
    plane_d2 = proj * proj / np.where(nn > 0, nn, 1.0)
    return np.where(inside, np.minimum(d2, plane_d2), d2)


def point_triangle_distance(points: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    return np.sqrt(point_triangle_distance_sq(points, triangles))


def _brute_numpy(points: np.ndarray, tri: np.ndarray) -> np.ndarray:
    out = np.empty(len(points))
    step = max(1, _CHUNK_PAIRS // max(len(tri), 1))
    for start in range(0, len(points), step):
        block = points[start : start + step]
        d2 = point_triangle_distance_sq(block[:, None, :], tri[None])
        out[start : start + step] = d2.min(axis=1)
    return out


def _candidates_numpy(points: np.ndarray, tri: np.ndarray, idx: np.ndarray) -> np.ndarray:
    out = np.empty(len(points))
    k = idx.shape[1]
    step = max(1, _CHUNK_PAIRS // k)
    for start in range(0, len(points), step):
        block = slice(start, start + step)
        d2 = point_triangle_distance_sq(points[block][:, None, :], tri[idx[block]])
        out[block] = d2.min(axis=1)
    return out


# --------------------------------------------------------------------------
# Compiled kernel (Ericson-style closest point with a degenerate fallback).
# --------------------------------------------------------------------------


@njit(cache=True)
def _seg_d2(px, py, pz, ax, ay, az, bx, by, bz):  # pragma: no cover - jitted
    abx, aby, abz = bx - ax, by - ay, bz - az
    nn = abx * abx + aby * aby + abz * abz
    t = 0.0
    if nn > 0.0:
        t = ((px - ax) * abx + (py - ay) * aby + (pz - az) * abz) / nn
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
    dx = px - (ax + t * abx)
    dy = py - (ay + t * aby)
    dz = pz - (az + t * abz)
    return dx * dx + dy * dy + dz * dz


@njit(cache=True)
def _tri_d2(px, py, pz, t0, t1, t2):  # pragma: no cover - jitted
    ax, ay, az = t0[0], t0[1], t0[2]
    bx, by, bz = t1[0], t1[1], t1[2]
    cx, cy, cz = t2[0], t2[1], t2[2]
    abx, aby, abz = bx - ax, by - ay, bz - az
    acx, acy, acz = cx - ax, cy - ay, cz - az
    apx, apy, apz = px - ax, py - ay, pz - az
    d1 = abx * apx + aby * apy + abz * apz
    d2 = acx * apx + acy * apy + acz * apz
    if d1 <= 0.0 and d2 <= 0.0:
        return apx * apx + apy * apy + apz * apz
    bpx, bpy, bpz = px - bx, py - by, pz - bz
    d3 = abx * bpx + aby * bpy + abz * bpz
    d4 = acx * bpx + acy * bpy + acz * bpz
    if d3 >= 0.0 and d4 <= d3:
        return bpx * bpx + bpy * bpy + bpz * bpz
    cpx, cpy, cpz = px - cx, py - cy, pz - cz
    d5 = abx * cpx + aby * cpy + abz * cpz
    d6 = acx * cpx + acy * cpy + acz * cpz
    if d6 >= 0.0 and d5 <= d6:
        return cpx * cpx + cpy * cpy + cpz * cpz
    vc = d1 * d4 - d3 * d2
    if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0:
        denom = d1 - d3
        if denom != 0.0:
            v = d1 / denom
            dx = apx - v * abx
            dy = apy - v * aby
            dz = apz - v * abz
            return dx * dx + dy * dy + dz * dz
    vb = d5 * d2 - d1 * d6
    if vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0:
        denom = d2 - d6
        if denom != 0.0:
            w = d2 / denom
            dx = apx - w * acx
            dy = apy - w * acy
            dz = apz - w * acz
            return dx * dx + dy * dy + dz * dz
    va = d3 * d6 - d5 * d4
    if va <= 0.0 and d4 - d3 >= 0.0 and d5 - d6 >= 0.0:
        denom = (d4 - d3) + (d5 - d6)
        if denom != 0.0:
            w = (d4 - d3) / denom
            dx = bpx - w * (cx - bx)
            dy = bpy - w * (cy - by)
            dz = bpz - w * (cz - bz)
            return dx * dx + dy * dy + dz * dz
    denom = va + vb + vc
    if denom > 0.0:
        v = vb / denom
        w = vc / denom
        dx = apx - v * abx - w * acx
        dy = apy - v * aby - w * acy
        dz = apz - v * abz - w * acz
        return dx * dx + dy * dy + dz * dz
    # Degenerate triangle: fall back to the nearest edge.
    d = _seg_d2(px, py, pz, ax, ay, az, bx, by, bz)
    d_bc = _seg_d2(px, py, pz, bx, by, bz, cx, cy, cz)
    if d_bc < d:
        d = d_bc
    d_ac = _seg_d2(px, py, pz, ax, ay, az, cx, cy, cz)
    if d_ac < d:
        d = d_ac
    return d


@njit(cache=True, parallel=True)
def _brute_jit(points, tri):  # pragma: no cover - jitted
    n = points.shape[0]
    out = np.empty(n)
    for i in prange(n):
        px, py, pz = points[i, 0], points[i, 1], points[i, 2]
        best = np.inf
        for j in range(tri.shape[0]):
            d = _tri_d2(px, py, pz, tri[j, 0], tri[j, 1], tri[j, 2])
            if d < best:
                best = d
        out[i] = best
    return out


@njit(cache=True, parallel=True)
def _candidates_jit(points, tri, idx):  # pragma: no cover - jitted
    n = points.shape[0]
    out = np.empty(n)
    for i in prange(n):
        px, py, pz = points[i, 0], points[i, 1], points[i, 2]
        best = np.inf
        for jj in range(idx.shape[1]):
            j = idx[i, jj]
            d = _tri_d2(px, py, pz, tri[j, 0], tri[j, 1], tri[j, 2])
            if d < best:
                best = d
        out[i] = best
    return out


def _min_d2_candidates(points, tri, idx) -> np.ndarray:
    if _HAVE_NUMBA:
        return _candidates_jit(points, tri, np.ascontiguousarray(idx))
    return _candidates_numpy(points, tri, idx)


def _min_d2_brute(points, tri) -> np.ndarray:
    if _HAVE_NUMBA:
        return _brute_jit(points, tri)
    return _brute_numpy(points, tri)


def mesh_distance(points: np.ndarray, mesh: Mesh, k: int = 16) -> np.ndarray:
    """Exact unsigned distance from each query point to the triangle set."""
    points = np.ascontiguousarray(np.asarray(points, dtype=np.float64).reshape(-1, 3))
    tri = np.ascontiguousarray(mesh.triangles())
    if len(tri) == 0:
        raise DegenerateInputError("mesh has no faces")
    if len(tri) <= k:
        return np.sqrt(_min_d2_brute(points, tri))

    centroids = tri.mean(axis=1)
    radius = np.linalg.norm(tri - centroids[:, None, :], axis=2).max(axis=1)
    r_max = float(radius.max())
    tree = cKDTree(centroids)
    centroid_d, idx = tree.query(points, k=k, workers=-1)
    best = np.sqrt(_min_d2_candidates(points, tri, idx))
    # Any triangle outside the candidate set is at least
    # (k-th centroid distance - largest circumradius) away.
    uncertified = best > centroid_d[:, -1] - r_max
    if uncertified.any():
        best[uncertified] = np.sqrt(_min_d2_brute(points[uncertified], tri))
    return best


def compute_udf(mesh: Mesh, resolution: int = 64, padding: float | None = None) -> ScalarGrid:
    """Sample the exact unsigned distance field on a cubic grid.

    The grid is centered on the mesh bounding box and padded so a positive
    level set has room to close around the surface; default padding is 8%
    of the longest extent per side.
    """
    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    flags = detect_degenerate(mesh)
    if flags & {DegenerateFlag.EMPTY, DegenerateFlag.NAN_VERTICES, DegenerateFlag.ZERO_AREA}:
        raise DegenerateInputError(f"mesh is degenerate: {sorted(f.value for f in flags)}")
    lo, hi = mesh.bounds()
    extent = float((hi - lo).max())
    if padding is None:
        padding = 0.08 * extent
    half = extent / 2.0 + padding
    center = (lo + hi) / 2.0
    origin = center - half
    spacing = 2.0 * half / (resolution - 1)

    r = resolution
    xs = origin[0] + spacing * np.arange(r)
    ys = origin[1] + spacing * np.arange(r)
    zs = origin[2] + spacing * np.arange(r)
    gx, gy, gz = np.meshgrid(xs, ys, zs, indexing="ij")
    pts = np.stack([gx, gy, gz], axis=-1).reshape(-1, 3)
    values = mesh_distance(pts, mesh).reshape(r, r, r)
    return ScalarGrid(resolution=r, origin=origin, spacing=spacing, values=values)


def _gather_corners(grid: ScalarGrid, pts: np.ndarray):
    r = grid.resolution
    u = (np.asarray(pts, dtype=np.float64) - grid.origin) / grid.spacing
    i0 = np.clip(np.floor(u).astype(np.int64), 0, r - 2)
    f = np.clip(u - i0, 0.0, 1.0)
    v = grid.values
    ix, iy, iz = i0[:, 0], i0[:, 1], i0[:, 2]
    corners = {
        (dx, dy, dz): v[ix + dx, iy + dy, iz + dz]
        for dx in (0, 1)
        for dy in (0, 1)
        for dz in (0, 1)
    }
    return corners, f


def trilinear_interpolate(grid: ScalarGrid, pts: np.ndarray) -> np.ndarray:
    c, f = _gather_corners(grid, pts)
    fx, fy, fz = f[:, 0], f[:, 1], f[:, 2]
    gx, gy, gz = 1 - fx, 1 - fy, 1 - fz
    return (
        c[0, 0, 0] * gx * gy * gz
        + c[1, 0, 0] * fx * gy * gz
        + c[0, 1, 0] * gx * fy * gz
        + c[0, 0, 1] * gx * gy * fz
        + c[1, 1, 0] * fx * fy * gz
        + c[1, 0, 1] * fx * gy * fz
        + c[0, 1, 1] * gx * fy * fz
        + c[1, 1, 1] * fx * fy * fz
    )


def trilinear_gradient(grid: ScalarGrid, pts: np.ndarray) -> np.ndarray:
    """Analytic gradient of the trilinear interpolant, in world units."""
    c, f = _gather_corners(grid, pts)
    fx, fy, fz = f[:, 0], f[:, 1], f[:, 2]
    gx, gy, gz = 1 - fx, 1 - fy, 1 - fz
    ddx = (
        (c[1, 0, 0] - c[0, 0, 0]) * gy * gz
        + (c[1, 1, 0] - c[0, 1, 0]) * fy * gz
        + (c[1, 0, 1] - c[0, 0, 1]) * gy * fz
        + (c[1, 1, 1] - c[0, 1, 1]) * fy * fz
    )
    ddy = (
        (c[0, 1, 0] - c[0, 0, 0]) * gx * gz
        + (c[1, 1, 0] - c[1, 0, 0]) * fx * gz
        + (c[0, 1, 1] - c[0, 0, 1]) * gx * fz
        + (c[1, 1, 1] - c[1, 0, 1]) * fx * fz
    )
    ddz = (
        (c[0, 0, 1] - c[0, 0, 0]) * gx * gy
        + (c[1, 0, 1] - c[1, 0, 0]) * fx * gy
        + (c[0, 1, 1] - c[0, 1, 0]) * gx * fy
        + (c[1, 1, 1] - c[1, 1, 0]) * fx * fy
    )
    return np.stack([ddx, ddy, ddz], axis=1) / grid.spacing
