"""Procedural mesh primitives for synthetic assets and tests."""

from __future__ import annotations

import numpy as np

from .assets import Mesh

# Faces of a unit box, wound outward (CCW seen from outside).
_BOX_FACES = np.array(
    [
        [0, 2, 1], [0, 3, 2],  # -z
        [4, 5, 6], [4, 6, 7],  # +z
        [0, 1, 5], [0, 5, 4],  # -y
        [3, 7, 6], [3, 6, 2],  # +y
        [0, 4, 7], [0, 7, 3],  # -x
        [1, 2, 6], [1, 6, 5],  # +x
    ],
    dtype=np.int64,
)


def box(size=(1.0, 1.0, 1.0), center=(0.0, 0.0, 0.0)) -> Mesh:
    sx, sy, sz = (float(s) / 2.0 for s in size)
    cx, cy, cz = (float(c) for c in center)
    verts = np.array(
        [
            [cx - sx, cy - sy, cz - sz],
            [cx + sx, cy - sy, cz - sz],
            [cx + sx, cy + sy, cz - sz],
            [cx - sx, cy + sy, cz - sz],
            [cx - sx, cy - sy, cz + sz],
            [cx + sx, cy - sy, cz + sz],
            [cx + sx, cy + sy, cz + sz],
            [cx - sx, cy + sy, cz + sz],
        ]
    )
    return Mesh(vertices=verts, faces=_BOX_FACES)


def icosphere(radius: float = 1.0, subdivisions: int = 2, center=(0.0, 0.0, 0.0)) -> Mesh:
    """Subdivided icosahedron; 20 * 4^subdivisions outward-wound faces."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array(
        [
            [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
            [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
            [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
        ],
        dtype=np.float64,
    )
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [tuple(v) for v in verts]
    for _ in range(subdivisions):
        cache: dict[tuple[int, int], int] = {}

        def midpoint(a: int, b: int) -> int:
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = np.array(verts[a]) + np.array(verts[b])
                m /= np.linalg.norm(m)
                cache[key] = len(verts)
                verts.append(tuple(m))
            return cache[key]

        next_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            next_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = next_faces
    vertices = np.array(verts) * radius + np.asarray(center, dtype=np.float64)
    return Mesh(vertices=vertices, faces=np.array(faces, dtype=np.int64))


def torus(major_radius: float = 1.0, minor_radius: float = 0.3, n_major: int = 32, n_minor: int = 16) -> Mesh:
    u = 2 * np.pi * np.arange(n_major) / n_major
    v = 2 * np.pi * np.arange(n_minor) / n_minor
    uu, vv = np.meshgrid(u, v, indexing="ij")
    x = (major_radius + minor_radius * np.cos(vv)) * np.cos(uu)
    y = (major_radius + minor_radius * np.cos(vv)) * np.sin(uu)
    z = minor_radius * np.sin(vv)
    verts = np.stack([x, y, z], axis=-1).reshape(-1, 3)
    faces = []
    for i in range(n_major):
        for j in range(n_minor):
            a = i * n_minor + j
            b = i * n_minor + (j + 1) % n_minor
            c = ((i + 1) % n_major) * n_minor + (j + 1) % n_minor
            d = ((i + 1) % n_major) * n_minor + j
            faces += [(a, b, c), (a, c, d)]
    return Mesh(vertices=verts, faces=np.array(faces, dtype=np.int64))


def cylinder(radius: float = 0.5, height: float = 1.0, segments: int = 24, center=(0.0, 0.0, 0.0)) -> Mesh:
    cx, cy, cz = (float(c) for c in center)
    theta = 2 * np.pi * np.arange(segments) / segments
    ring = np.stack([radius * np.cos(theta), radius * np.sin(theta)], axis=1)
    bottom = np.column_stack([ring[:, 0] + cx, ring[:, 1] + cy, np.full(segments, cz - height / 2)])
    top = np.column_stack([ring[:, 0] + cx, ring[:, 1] + cy, np.full(segments, cz + height / 2)])
    verts = np.concatenate([bottom, top, [[cx, cy, cz - height / 2]], [[cx, cy, cz + height / 2]]])
    cb, ct = 2 * segments, 2 * segments + 1
    faces = []
    for i in range(segments):
        j = (i + 1) % segments
        faces += [(i, j, segments + j), (i, segments + j, segments + i)]  # side
        faces += [(cb, j, i), (ct, segments + i, segments + j)]  # caps
    return Mesh(vertices=verts, faces=np.array(faces, dtype=np.int64))


def tetrahedron(scale: float = 1.0, center=(0.0, 0.0, 0.0)) -> Mesh:
    verts = (
        np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=np.float64) * scale
        + np.asarray(center, dtype=np.float64)
    )
    faces = np.array([[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]], dtype=np.int64)
    return Mesh(vertices=verts, faces=faces)


def quad(size: float = 1.0, center=(0.0, 0.0, 0.0)) -> Mesh:
    """Open single-sided square in the xy plane (not watertight)."""
    s = size / 2.0
    c = np.asarray(center, dtype=np.float64)
    verts = np.array([[-s, -s, 0], [s, -s, 0], [s, s, 0], [-s, s, 0]]) + c
    return Mesh(vertices=verts, faces=np.array([[0, 1, 2], [0, 2, 3]], dtype=np.int64))
