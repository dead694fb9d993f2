"""Surface point sampling and farthest point subsampling."""

from __future__ import annotations

from enum import Enum

import numpy as np

from ..assets import Mesh, PointCloud
from ..errors import DegenerateInputError, VisibilityExhaustedError

_N_VISIBILITY_RAYS = 64
_RAY_TRI_CHUNK = 2_000_000


class StartRule(Enum):
    FIRST_INDEX = "first_index"
    FARTHEST_FROM_CENTROID = "farthest_from_centroid"


def _hemisphere_directions(n: int = _N_VISIBILITY_RAYS) -> np.ndarray:
    """Deterministic Fibonacci-spiral directions on the upper hemisphere."""
    i = np.arange(n, dtype=np.float64)
    z = (i + 0.5) / n  # strictly above the horizon
    phi = i * np.pi * (3.0 - np.sqrt(5.0))
    r = np.sqrt(1.0 - z * z)
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _tangent_frames(normals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.where(np.abs(normals[:, 2:3]) < 0.9, [[0.0, 0.0, 1.0]], [[1.0, 0.0, 0.0]])
    t = np.cross(helper, normals)
    t /= np.linalg.norm(t, axis=1, keepdims=True)
    b = np.cross(normals, t)
    return t, b


def _rays_blocked(origins: np.ndarray, directions: np.ndarray, tri: np.ndarray, eps: float) -> np.ndarray:
    """Moller-Trumbore any-hit test; True where a ray hits the mesh."""
    blocked = np.zeros(len(origins), dtype=bool)
    e1 = tri[:, 1] - tri[:, 0]
    e2 = tri[:, 2] - tri[:, 0]
    step = max(1, _RAY_TRI_CHUNK // max(len(tri), 1))
    for start in range(0, len(origins), step):
        sl = slice(start, start + step)
        o = origins[sl][:, None, :]
        d = directions[sl][:, None, :]
        p = np.cross(d, e2[None])
        det = np.einsum("rtk,tk->rt", p, e1)
        inv = np.where(np.abs(det) > 1e-12, 1.0 / np.where(det == 0, 1.0, det), 0.0)
        s = o - tri[None, :, 0]
        u = np.einsum("rtk,rtk->rt", s, p) * inv
        q = np.cross(s, e1[None])
        v = np.einsum("rtk,rk->rt", q, directions[sl]) * inv
        t = np.einsum("rtk,tk->rt", q, e2) * inv
        hit = (np.abs(det) > 1e-12) & (u >= 0) & (v >= 0) & (u + v <= 1) & (t > eps)
        blocked[sl] = hit.any(axis=1)
    return blocked


def _visible(points: np.ndarray, normals: np.ndarray, mesh: Mesh, eps: float) -> np.ndarray:
    """A point is visible when at least one outward hemisphere ray escapes."""
    tri = mesh.triangles()
    dirs_local = _hemisphere_directions()
    t, b = _tangent_frames(normals)
    visible = np.zeros(len(points), dtype=bool)
    undecided = np.arange(len(points))
    for local in dirs_local:
        if len(undecided) == 0:
            break
        world = (
            local[0] * t[undecided] + local[1] * b[undecided] + local[2] * normals[undecided]
        )
        origins = points[undecided] + world * eps
        blocked = _rays_blocked(origins, world, tri, eps)
        visible[undecided[~blocked]] = True
        undecided = undecided[blocked]
    return visible


def sample_surface(
    mesh: Mesh, n: int, seed: int = 0, visibility_filter: bool = False
) -> PointCloud:
    """Draw exactly n area-weighted surface samples with face normals.

    Deterministic for a given seed.  With the visibility filter on, points
    whose 64 outward hemisphere rays are all blocked by the mesh itself
    are rejected and resampled (at most 20n attempts).
    """
    if n <= 0:
        raise ValueError("n must be positive")
    tri = mesh.triangles()
    if len(tri) == 0:
        raise DegenerateInputError("mesh has no faces")
    cross = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    areas = 0.5 * np.linalg.norm(cross, axis=1)
    total = areas.sum()
    if total <= 0:
        raise DegenerateInputError("mesh has zero surface area")
    prob = areas / total
    face_normals = mesh.face_normals()
    lo, hi = mesh.bounds()
    eps = 1e-4 * float(np.linalg.norm(hi - lo))

    rng = np.random.default_rng(seed)
    points = np.empty((0, 3))
    normals = np.empty((0, 3))
    attempts = 0
    budget = 20 * n
    while len(points) < n:
        want = n - len(points)
        if visibility_filter and attempts + want > budget:
            raise VisibilityExhaustedError(
                f"could not find {n} visible points in {budget} attempts"
            )
        attempts += want
        face = rng.choice(len(tri), size=want, p=prob)
        u = rng.random(want)
        v = rng.random(want)
        su = np.sqrt(u)
        bary = np.stack([1.0 - su, su * (1.0 - v), su * v], axis=1)
        batch = np.einsum("nc,ncd->nd", bary, tri[face])
        batch_n = face_normals[face]
        if visibility_filter:
            keep = _visible(batch, batch_n, mesh, eps)
            batch, batch_n = batch[keep], batch_n[keep]
        points = np.concatenate([points, batch])
        normals = np.concatenate([normals, batch_n])
    return PointCloud(points=points[:n], normals=normals[:n])


def farthest_point_sample(
    cloud: PointCloud | np.ndarray,
    k: int,
    start: StartRule = StartRule.FARTHEST_FROM_CENTROID,
) -> np.ndarray:
    """Greedy max-min subsampling; ties broken by lowest index.

    At each step the chosen index maximizes the distance to the already
    selected set over all remaining indices.
    """
    points = cloud.points if isinstance(cloud, PointCloud) else np.asarray(cloud, dtype=np.float64)
    n = len(points)
    if not 1 <= k <= n:
        raise ValueError(f"k must be in [1, {n}], got {k}")
    if start is StartRule.FIRST_INDEX:
        first = 0
    else:
        delta = points - points.mean(axis=0)
        first = int(np.argmax(np.einsum("ij,ij->i", delta, delta)))
    selected = np.empty(k, dtype=np.int64)
    selected[0] = first
    diff = points - points[first]
    d2 = np.einsum("ij,ij->i", diff, diff)
    d2[first] = -1.0  # sentinel: never re-pick a selected index
    for i in range(1, k):
        nxt = int(np.argmax(d2))
        selected[i] = nxt
        diff = points - points[nxt]
        cand = np.einsum("ij,ij->i", diff, diff)
        np.minimum(d2, cand, out=d2, where=d2 >= 0)
        d2[nxt] = -1.0
    return selected
