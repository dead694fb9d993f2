"""Watertight level-set extraction from unsigned distance grids.

The extractor places one dual vertex per grid cell at the mean of that
cell's edge-crossing points and emits one quad per crossing grid edge
(the face dual to the edge).  Grid nodes are classified inside/outside
against the iso level, enclosed cavities are filled so only the outermost
surface is produced, and node patterns that would create non-manifold
dual edges are repaired before meshing.  Dual vertices are finally
projected down the distance gradient onto the zero set, which cancels the
dilation a positive level set of an unsigned field would otherwise add.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy import ndimage

from ..assets import Mesh
from ..errors import NoSurfaceError
from .distance import ScalarGrid, trilinear_gradient, trilinear_interpolate

logger = logging.getLogger(__name__)

# (d1, d2) perpendicular axes in right-handed cyclic order per edge axis.
_PERP = {0: (1, 2), 1: (2, 0), 2: (0, 1)}


def _outside_mask(values: np.ndarray, iso: float) -> np.ndarray:
    """Nodes at/above iso that are flood-connected to the grid boundary.

    Everything else (the near-surface band and any enclosed cavity)
    counts as inside, so nested interior surfaces are not emitted.
    """
    above = values >= iso
    labels, _ = ndimage.label(above)
    boundary = np.concatenate(
        [
            labels[0].ravel(), labels[-1].ravel(),
            labels[:, 0].ravel(), labels[:, -1].ravel(),
            labels[:, :, 0].ravel(), labels[:, :, -1].ravel(),
        ]
    )
    reachable = np.unique(boundary[boundary > 0])
    return np.isin(labels, reachable)


def _repair_alternating_faces(inside: np.ndarray) -> np.ndarray:
    """Flip nodes so no 2x2 node square has a diagonal inside pattern.

    Such squares give the shared dual edge four incident quads.  Flipping
    one of the two outside nodes to inside removes the pattern; flips are
    monotone (outside -> inside) so the sweep terminates.  Boundary-layer
    nodes are never flipped, which is always possible because two diagonal
    nodes of one face cannot both lie in the boundary layer unless the
    whole face does (and boundary faces are uniformly outside).
    """
    inside = inside.copy()
    r = inside.shape[0]
    values_boundary = np.zeros_like(inside)
    values_boundary[0] = values_boundary[-1] = True
    values_boundary[:, 0] = values_boundary[:, -1] = True
    values_boundary[:, :, 0] = values_boundary[:, :, -1] = True

    def face_nodes(axis_pair, base):
        # 2x2 node square spanning +1 along both axes of axis_pair.
        nodes = []
        for da in (0, 1):
            for db in (0, 1):
                p = list(base)
                p[axis_pair[0]] += da
                p[axis_pair[1]] += db
                nodes.append(tuple(p))
        return nodes  # order: n00, n01, n10, n11

    for _ in range(1000):
        flipped = 0
        for ax in ((0, 1), (0, 2), (1, 2)):
            sub = [slice(None)] * 3
            sub[ax[0]] = slice(0, r - 1)
            sub[ax[1]] = slice(0, r - 1)
            n00 = inside[tuple(sub)]
            s10 = list(sub); s10[ax[0]] = slice(1, r); n10 = inside[tuple(s10)]
            s01 = list(sub); s01[ax[1]] = slice(1, r); n01 = inside[tuple(s01)]
            s11 = list(s10); s11[ax[1]] = slice(1, r); n11 = inside[tuple(s11)]
            alt = (n00 == n11) & (n01 == n10) & (n00 != n01)
            if not alt.any():
                continue
            # Sliced axes keep their original order, so argwhere rows are
            # directly the base node coordinates.
            for idx in np.argwhere(alt):
                nodes = face_nodes(ax, idx)
                v00, v01, v10, v11 = (inside[n] for n in nodes)
                if not (v00 == v11 and v01 == v10 and v00 != v01):
                    continue  # already fixed by an earlier flip
                outside_pair = [nodes[0], nodes[3]] if not v00 else [nodes[1], nodes[2]]
                candidates = [n for n in outside_pair if not values_boundary[n]]
                if not candidates:
                    raise RuntimeError("cannot repair manifold pattern at grid boundary")
                inside[candidates[0]] = True
                flipped += 1
        if flipped == 0:
            return inside
    raise RuntimeError("manifold repair did not converge")


def extract_level_set(grid: ScalarGrid, iso: float, project_to_surface: bool = True) -> Mesh:
    """Extract a closed 2-manifold mesh at the given positive iso level."""
    if not (iso > 0):
        raise ValueError("iso must be positive for an unsigned field")
    values = grid.values
    r = grid.resolution

    inside = ~_outside_mask(values, iso)
    shell = [inside[0], inside[-1], inside[:, 0], inside[:, -1], inside[:, :, 0], inside[:, :, -1]]
    if any(s.any() for s in shell):
        logger.warning("iso surface reaches the grid boundary; clipping to the grid")
        inside[0] = inside[-1] = False
        inside[:, 0] = inside[:, -1] = False
        inside[:, :, 0] = inside[:, :, -1] = False
    if not inside.any():
        raise NoSurfaceError(f"iso level {iso} is not crossed anywhere")
    inside = _repair_alternating_faces(inside)

    n_cells = r - 1
    sums = np.zeros(((n_cells) ** 3, 3))
    counts = np.zeros((n_cells) ** 3, dtype=np.int64)

    def cell_flat(ci, cj, ck):
        return (ci * n_cells + cj) * n_cells + ck

    quad_cells: list[np.ndarray] = []
    for axis in range(3):
        low = [slice(None)] * 3
        low[axis] = slice(0, r - 1)
        high = [slice(None)] * 3
        high[axis] = slice(1, r)
        a_in = inside[tuple(low)]
        b_in = inside[tuple(high)]
        crossing = a_in != b_in
        if not crossing.any():
            continue
        node = np.argwhere(crossing)  # lower-node index of each crossing edge
        va = values[tuple(low)][crossing]
        vb = values[tuple(high)][crossing]
        denom = vb - va
        t = np.where(np.abs(denom) > 0, (iso - va) / np.where(denom == 0, 1.0, denom), 0.5)
        t = np.clip(t, 0.0, 1.0)
        pos = grid.origin + node * grid.spacing
        pos[:, axis] += t * grid.spacing

        d1, d2 = _PERP[axis]
        offsets = []
        for a_off, b_off in ((1, 1), (0, 1), (0, 0), (1, 0)):
            c = node.copy()
            c[:, d1] -= a_off
            c[:, d2] -= b_off
            offsets.append(cell_flat(c[:, 0], c[:, 1], c[:, 2]))
        quad = np.stack(offsets, axis=1)  # (m, 4) with +axis-facing winding
        lower_inside = a_in[crossing]
        quad[~lower_inside] = quad[~lower_inside][:, ::-1]

        for col in range(4):
            np.add.at(sums, quad[:, col], pos)
            np.add.at(counts, quad[:, col], 1)
        quad_cells.append(quad)

    if not quad_cells:
        raise NoSurfaceError(f"iso level {iso} is not crossed anywhere")

    used = counts > 0
    vertex_id = np.full(len(counts), -1, dtype=np.int64)
    vertex_id[used] = np.arange(int(used.sum()))
    vertices = sums[used] / counts[used][:, None]

    if project_to_surface:
        vertices = _project_to_zero_set(grid, vertices, iso)

    quads = vertex_id[np.concatenate(quad_cells)]
    faces = np.concatenate([quads[:, [0, 1, 2]], quads[:, [0, 2, 3]]])
    return Mesh(vertices=vertices, faces=faces)


def _project_to_zero_set(grid: ScalarGrid, vertices: np.ndarray, iso: float) -> np.ndarray:
    """Walk each vertex down the distance gradient toward the surface."""
    lo = grid.origin + 1e-9
    hi = grid.origin + (grid.resolution - 1) * grid.spacing - 1e-9
    original = vertices.copy()
    pts = vertices.copy()
    for _ in range(2):
        d = trilinear_interpolate(grid, pts)
        g = trilinear_gradient(grid, pts)
        norm = np.linalg.norm(g, axis=1)
        ok = norm > 1e-9
        step = np.zeros_like(pts)
        step[ok] = g[ok] * (d[ok] / norm[ok])[:, None]
        pts = np.clip(pts - step, lo, hi)
    # Bound total displacement so unstable gradients cannot fling vertices.
    disp = pts - original
    lengths = np.linalg.norm(disp, axis=1)
    cap = 2.0 * iso
    too_far = lengths > cap
    if too_far.any():
        disp[too_far] *= (cap / lengths[too_far])[:, None]
        pts = original + disp
    return pts


def enclosed_volume(mesh: Mesh) -> float:
    """Signed volume via the divergence theorem (positive for outward winding)."""
    tri = mesh.triangles()
    return float(np.einsum("ij,ij->i", tri[:, 0], np.cross(tri[:, 1], tri[:, 2])).sum() / 6.0)
