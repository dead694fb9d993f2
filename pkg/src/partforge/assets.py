"""Core data types and on-disk formats for multi-part assets.

An asset directory contains a ``manifest.json`` naming the parts plus one
ASCII OBJ file per part.  The manifest is the source of truth for part
names and ordering; names embedded in the OBJ files are ignored.
"""

from __future__ import annotations

import json
import logging
import struct
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    IndexOutOfRangeError,
    IoFailureError,
    MalformedMeshError,
    MissingManifestError,
    PartForgeError,
)

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
PFPC_MAGIC = b"PFPC"

PIPELINE_STAGES = ("preprocess", "filter", "cluster", "postprocess")


class AssetSource(str, Enum):
    SKETCHFAB = "sketchfab"
    COMMERCIAL = "commercial"
    INTERNAL = "internal"
    SYNTHETIC = "synthetic"


def _as_float_array(values, cols: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        return arr.reshape(0, cols)
    if arr.ndim != 2 or arr.shape[1] != cols:
        raise ValueError(f"{name} must have shape (n, {cols}), got {arr.shape}")
    return arr


@dataclass(frozen=True)
class Mesh:
    """Indexed triangle mesh.

    Face indices are validated at construction; data-quality invariants
    (finite coordinates, unit normals) are enforced at the IO boundary by
    :meth:`validate` so degenerate meshes can still be represented and
    flagged by the preprocessing stage.
    """

    vertices: np.ndarray
    faces: np.ndarray
    normals: np.ndarray | None = None
    uvs: np.ndarray | None = None
    texture: np.ndarray | None = None  # in-memory RGBA8 reference, not serialized

    def __post_init__(self):
        vertices = _as_float_array(self.vertices, 3, "vertices")
        faces = np.asarray(self.faces, dtype=np.int64)
        if faces.size == 0:
            faces = faces.reshape(0, 3)
        if faces.ndim != 2 or faces.shape[1] != 3:
            raise ValueError(f"faces must have shape (n, 3), got {faces.shape}")
        if faces.size and (faces.min() < 0 or faces.max() >= len(vertices)):
            raise IndexOutOfRangeError(detail=f"max index {faces.max()}, {len(vertices)} vertices")
        normals = None if self.normals is None else _as_float_array(self.normals, 3, "normals")
        uvs = None if self.uvs is None else _as_float_array(self.uvs, 2, "uvs")
        for name, arr in (("normals", normals), ("uvs", uvs)):
            if arr is not None and len(arr) != len(vertices):
                raise ValueError(f"{name} must be per-vertex ({len(arr)} != {len(vertices)})")
        for arr in (vertices, faces, normals, uvs):
            if arr is not None:
                arr.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "uvs", uvs)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def triangles(self) -> np.ndarray:
        """Per-face vertex positions, shape (n_faces, 3, 3)."""
        return self.vertices[self.faces]

    def face_normals(self, normalized: bool = True) -> np.ndarray:
        tri = self.triangles()
        n = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
        if normalized:
            length = np.linalg.norm(n, axis=1, keepdims=True)
            n = np.where(length > 0, n / np.where(length == 0, 1.0, length), 0.0)
        return n

    def surface_area(self) -> float:
        tri = self.triangles()
        cross = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
        return float(0.5 * np.linalg.norm(cross, axis=1).sum())

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        if self.n_vertices == 0:
            raise ValueError("empty mesh has no bounds")
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def validate(self) -> None:
        """Enforce the full data-quality contract; raises ValueError."""
        if not np.isfinite(self.vertices).all():
            raise ValueError("non-finite vertex coordinate")
        if self.normals is not None and len(self.normals):
            lengths = np.linalg.norm(self.normals, axis=1)
            if np.abs(lengths - 1.0).max() > 1e-4:
                raise ValueError("normals are not unit length")


@dataclass(frozen=True)
class MultiPartAsset:
    """A named, ordered set of mesh parts plus provenance metadata."""

    asset_id: str
    source: AssetSource
    parts: Mapping[str, Mesh]
    global_caption: str | None = None

    def __post_init__(self):
        parts = dict(self.parts)
        if not parts:
            raise ValueError("asset must contain at least one part")
        object.__setattr__(self, "parts", parts)

    @property
    def part_names(self) -> tuple[str, ...]:
        return tuple(self.parts.keys())

    @property
    def n_parts(self) -> int:
        return len(self.parts)

    def meshes(self) -> tuple[Mesh, ...]:
        return tuple(self.parts.values())

    def subset(self, names: Iterable[str], asset_id: str | None = None) -> "MultiPartAsset":
        names = list(names)
        missing = [n for n in names if n not in self.parts]
        if missing:
            raise KeyError(f"unknown parts: {missing}")
        return MultiPartAsset(
            asset_id=asset_id or self.asset_id,
            source=self.source,
            parts={n: self.parts[n] for n in names},
            global_caption=self.global_caption,
        )


@dataclass(frozen=True)
class PartSchema:
    """Ordered open-vocabulary part names; order defines output ordering."""

    part_names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.part_names)
        if not names:
            raise ValueError("schema must not be empty")
        folded = [n.strip().casefold() for n in names]
        if len(set(folded)) != len(folded):
            raise ValueError("schema names must be unique after trim/case-fold")
        object.__setattr__(self, "part_names", names)

    @classmethod
    def from_asset(cls, asset: MultiPartAsset) -> "PartSchema":
        return cls(asset.part_names)

    def __contains__(self, name: str) -> bool:
        return name in self.part_names

    def __len__(self) -> int:
        return len(self.part_names)


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray
    normals: np.ndarray | None = None

    def __post_init__(self):
        points = _as_float_array(self.points, 3, "points")
        normals = None if self.normals is None else _as_float_array(self.normals, 3, "normals")
        if normals is not None and len(normals) != len(points):
            raise ValueError("normals must parallel points")
        points.setflags(write=False)
        if normals is not None:
            normals.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "normals", normals)

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class PartManifestEntry:
    name: str
    mesh_file: str
    face_count: int
    surface_area: float


@dataclass
class AssetManifest:
    """Per-asset bookkeeping: part inventory plus pipeline stage statuses.

    Stage statuses form a prefix chain: a stage may only be recorded once
    every earlier stage succeeded.
    """

    asset_id: str
    source: AssetSource
    parts: list[PartManifestEntry] = field(default_factory=list)
    stages: dict[str, str] = field(default_factory=dict)
    rejection: str | None = None
    global_caption: str | None = None

    def record_stage(self, stage: str, status: str = "done") -> None:
        if stage not in PIPELINE_STAGES:
            raise ValueError(f"unknown stage {stage!r}")
        idx = PIPELINE_STAGES.index(stage)
        for earlier in PIPELINE_STAGES[:idx]:
            if self.stages.get(earlier) != "done":
                raise ValueError(f"stage {stage!r} recorded before {earlier!r} succeeded")
        self.stages[stage] = status

    def completed(self) -> bool:
        return all(self.stages.get(s) == "done" for s in PIPELINE_STAGES)

    def to_json(self) -> dict:
        return {
            "asset_id": self.asset_id,
            "source": self.source.value,
            "parts": [
                {
                    "name": p.name,
                    "mesh_file": p.mesh_file,
                    "face_count": p.face_count,
                    "surface_area": p.surface_area,
                }
                for p in self.parts
            ],
            "stages": dict(self.stages),
            "rejection": self.rejection,
        }


# --------------------------------------------------------------------------
# OBJ serialization
#
# Floats are written with repr(), the shortest representation that parses
# back to the identical 64-bit value, so save -> load is bit-exact.
# --------------------------------------------------------------------------


def _fmt(value: float) -> str:
    return repr(float(value))


def write_obj(mesh: Mesh, path: Path) -> None:
    lines: list[str] = []
    for v in mesh.vertices:
        lines.append(f"v {_fmt(v[0])} {_fmt(v[1])} {_fmt(v[2])}")
    if mesh.uvs is not None:
        for t in mesh.uvs:
            lines.append(f"vt {_fmt(t[0])} {_fmt(t[1])}")
    if mesh.normals is not None:
        for n in mesh.normals:
            lines.append(f"vn {_fmt(n[0])} {_fmt(n[1])} {_fmt(n[2])}")
    has_t, has_n = mesh.uvs is not None, mesh.normals is not None
    for f in mesh.faces:
        a, b, c = (int(i) + 1 for i in f)
        if has_t and has_n:
            lines.append(f"f {a}/{a}/{a} {b}/{b}/{b} {c}/{c}/{c}")
        elif has_n:
            lines.append(f"f {a}//{a} {b}//{b} {c}//{c}")
        elif has_t:
            lines.append(f"f {a}/{a} {b}/{b} {c}/{c}")
        else:
            lines.append(f"f {a} {b} {c}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_obj(path: Path) -> tuple[Mesh, int]:
    """Parse an ASCII OBJ file.

    Only v/vn/vt/f records are honored; any other record type increments
    the returned ignored-record counter.  Polygonal faces are fan
    triangulated.  Normals/uvs are kept only when their indexing matches
    the vertex indexing (the layout this package writes).
    """
    verts: list[list[float]] = []
    norms: list[list[float]] = []
    uvs: list[list[float]] = []
    faces: list[list[int]] = []
    aligned_n = True
    aligned_t = True
    ignored = 0
    for raw in Path(path).read_text(encoding="utf-8", errors="replace").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        kind = tokens[0]
        try:
            if kind == "v":
                verts.append([float(x) for x in tokens[1:4]])
            elif kind == "vn":
                norms.append([float(x) for x in tokens[1:4]])
            elif kind == "vt":
                uvs.append([float(x) for x in tokens[1:3]])
            elif kind == "f":
                corners = []
                for tok in tokens[1:]:
                    fields = tok.split("/")
                    vi = int(fields[0])
                    vi = vi - 1 if vi > 0 else len(verts) + vi
                    ti = fields[1] if len(fields) > 1 and fields[1] else None
                    ni = fields[2] if len(fields) > 2 and fields[2] else None
                    if ti is not None and int(ti) - 1 != vi:
                        aligned_t = False
                    if ti is None:
                        aligned_t = False
                    if ni is not None and int(ni) - 1 != vi:
                        aligned_n = False
                    if ni is None:
                        aligned_n = False
                    corners.append(vi)
                for i in range(1, len(corners) - 1):
                    faces.append([corners[0], corners[i], corners[i + 1]])
            else:
                ignored += 1
        except (ValueError, IndexError) as exc:
            raise ValueError(f"bad OBJ record {line!r}: {exc}") from exc
    if ignored:
        logger.debug("ignored %d non-geometry records in %s", ignored, path)
    mesh = Mesh(
        vertices=np.array(verts, dtype=np.float64).reshape(-1, 3),
        faces=np.array(faces, dtype=np.int64).reshape(-1, 3),
        normals=np.array(norms, dtype=np.float64) if norms and aligned_n and len(norms) == len(verts) else None,
        uvs=np.array(uvs, dtype=np.float64) if uvs and aligned_t and len(uvs) == len(verts) else None,
    )
    return mesh, ignored


def _part_file_name(index: int, name: str) -> str:
    slug = "".join(c if c.isalnum() or c in "-_" else "_" for c in name.strip().lower())
    return f"{index:03d}_{slug or 'part'}.obj"


def save_asset(asset: MultiPartAsset, directory: Path) -> AssetManifest:
    """Write one OBJ per part plus manifest.json; returns the manifest."""
    directory = Path(directory)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        manifest = AssetManifest(
            asset_id=asset.asset_id, source=asset.source, global_caption=asset.global_caption
        )
        entries = []
        for i, (name, mesh) in enumerate(asset.parts.items()):
            mesh.validate()
            file_name = _part_file_name(i, name)
            write_obj(mesh, directory / file_name)
            manifest.parts.append(
                PartManifestEntry(
                    name=name,
                    mesh_file=file_name,
                    face_count=mesh.n_faces,
                    surface_area=mesh.surface_area(),
                )
            )
            entries.append({"name": name, "file": file_name})
        payload = {
            "asset_id": asset.asset_id,
            "source": asset.source.value,
            "global_caption": asset.global_caption,
            "parts": entries,
        }
        (directory / MANIFEST_NAME).write_text(
            json.dumps(payload, indent=2) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise IoFailureError(f"cannot write asset to {directory}: {exc}") from exc
    return manifest


def load_asset(directory: Path) -> MultiPartAsset:
    """Load an asset directory written by :func:`save_asset`."""
    directory = Path(directory)
    manifest_path = directory / MANIFEST_NAME
    if not manifest_path.is_file():
        raise MissingManifestError(f"no {MANIFEST_NAME} in {directory}")
    try:
        payload = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise MissingManifestError(f"unreadable manifest in {directory}: {exc}") from exc
    parts: dict[str, Mesh] = {}
    for entry in payload.get("parts", []):
        name = entry["name"]
        mesh_path = directory / entry["file"]
        if not mesh_path.is_file():
            raise MalformedMeshError(name, f"mesh file {entry['file']!r} absent")
        try:
            mesh, _ = read_obj(mesh_path)
            mesh.validate()
        except IndexOutOfRangeError as exc:
            raise IndexOutOfRangeError(name) from exc
        except ValueError as exc:
            raise MalformedMeshError(name, str(exc)) from exc
        if name in parts:
            raise MalformedMeshError(name, "duplicate part name in manifest")
        parts[name] = mesh
    if not parts:
        raise MalformedMeshError("", "manifest lists no parts")
    return MultiPartAsset(
        asset_id=payload["asset_id"],
        source=AssetSource(payload.get("source", "synthetic")),
        parts=parts,
        global_caption=payload.get("global_caption"),
    )


def concat_parts(asset: MultiPartAsset) -> Mesh:
    """Concatenate all parts into one mesh, re-offsetting face indices."""
    meshes = asset.meshes()
    if len(meshes) == 1:
        return meshes[0]
    verts, faces = [], []
    offset = 0
    for mesh in meshes:
        verts.append(mesh.vertices)
        faces.append(mesh.faces + offset)
        offset += mesh.n_vertices
    normals = None
    if all(m.normals is not None for m in meshes):
        normals = np.concatenate([m.normals for m in meshes])
    uvs = None
    if all(m.uvs is not None for m in meshes):
        uvs = np.concatenate([m.uvs for m in meshes])
    return Mesh(
        vertices=np.concatenate(verts),
        faces=np.concatenate(faces),
        normals=normals,
        uvs=uvs,
    )


# --------------------------------------------------------------------------
# PFPC point-cloud binary format: magic "PFPC", u32 little-endian count,
# then 6 x f32 little-endian (x, y, z, nx, ny, nz) per point.
# --------------------------------------------------------------------------


def write_pfpc(cloud: PointCloud, path: Path) -> None:
    n = len(cloud)
    data = np.zeros((n, 6), dtype="<f4")
    data[:, :3] = cloud.points
    if cloud.normals is not None:
        data[:, 3:] = cloud.normals
    try:
        with open(path, "wb") as fh:
            fh.write(PFPC_MAGIC)
            fh.write(struct.pack("<I", n))
            fh.write(data.tobytes())
    except OSError as exc:
        raise IoFailureError(f"cannot write {path}: {exc}") from exc


def read_pfpc(path: Path) -> PointCloud:
    try:
        blob = Path(path).read_bytes()
    except OSError as exc:
        raise IoFailureError(f"cannot read {path}: {exc}") from exc
    if blob[:4] != PFPC_MAGIC:
        raise PartForgeError(f"{path} is not a PFPC file")
    (n,) = struct.unpack("<I", blob[4:8])
    data = np.frombuffer(blob[8:], dtype="<f4")
    if data.size != n * 6:
        raise PartForgeError(f"{path}: expected {n * 6} floats, found {data.size}")
    data = data.reshape(n, 6).astype(np.float64)
    return PointCloud(points=data[:, :3], normals=data[:, 3:])
