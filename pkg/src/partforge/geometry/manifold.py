"""Edge-based manifoldness verification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _connected_components

from ..assets import Mesh


@dataclass(frozen=True)
class ManifoldReport:
    is_closed: bool
    is_two_manifold: bool
    boundary_edge_count: int
    non_manifold_edge_count: int
    connected_components: int

    def passes(self) -> bool:
        return self.is_closed and self.is_two_manifold


def check_manifold(mesh: Mesh) -> ManifoldReport:
    """Classify every edge by incident-face count.

    1 face -> boundary edge, 2 -> interior, >= 3 -> non-manifold.  A mesh
    is closed iff it has no boundary edges.  Components are counted over
    vertices referenced by at least one face.
    """
    faces = mesh.faces
    if len(faces) == 0:
        return ManifoldReport(True, True, 0, 0, 0)
    edges = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    edges = np.sort(edges, axis=1)
    _, counts = np.unique(edges, axis=0, return_counts=True)
    boundary = int((counts == 1).sum())
    non_manifold = int((counts >= 3).sum())

    used = np.unique(faces)
    remap = np.zeros(mesh.n_vertices, dtype=np.int64)
    remap[used] = np.arange(len(used))
    e = remap[edges]
    graph = coo_matrix(
        (np.ones(len(e), dtype=np.int8), (e[:, 0], e[:, 1])), shape=(len(used), len(used))
    )
    n_components, _ = _connected_components(graph, directed=False)

    return ManifoldReport(
        is_closed=boundary == 0,
        is_two_manifold=non_manifold == 0,
        boundary_edge_count=boundary,
        non_manifold_edge_count=non_manifold,
        connected_components=int(n_components),
    )
