"""Wavefront OBJ reading and writing (triangles, optional texture coords)."""

from __future__ import annotations

import numpy as np

from .errors import NonManifold
from .mesh import DiskMesh


def parse_obj(text: str):
    """Parse ``v``/``f`` records; ``vt``/``vn``/materials are ignored on input."""
    positions = []
    faces = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "v":
            if len(parts) < 3:
                raise NonManifold(f"line {lineno}: vertex needs at least 2 coordinates")
            positions.append([float(x) for x in parts[1:4]] + [0.0] * (4 - len(parts)))
        elif tag == "f":
            if len(parts) != 4:
                raise NonManifold(f"line {lineno}: only triangle faces are supported")
            idx = []
            for token in parts[1:]:
                v = token.split("/")[0]
                i = int(v)
                idx.append(i - 1 if i > 0 else len(positions) + i)
            faces.append(idx)
    if not positions or not faces:
        raise NonManifold("OBJ contains no usable geometry")
    return np.asarray(positions, dtype=np.float64), np.asarray(faces, dtype=np.int64)


def read_obj(path) -> tuple[np.ndarray, np.ndarray]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_obj(fh.read())


def load_mesh(path) -> tuple[DiskMesh, np.ndarray]:
    """Load an OBJ as a DiskMesh; returns (mesh, positions) for re-export."""
    positions, faces = read_obj(path)
    return DiskMesh.from_positions(positions, faces), positions


def normalize_uv(coords: np.ndarray) -> np.ndarray:
    """Translate/scale uniformly into [0,1]^2, preserving aspect ratio."""
    coords = np.asarray(coords, dtype=np.float64)
    lo = coords.min(axis=0)
    extent = (coords.max(axis=0) - lo).max()
    if extent <= 0:
        extent = 1.0
    return (coords - lo) / extent


def format_obj(positions: np.ndarray, faces: np.ndarray, uv: np.ndarray | None = None) -> str:
    """OBJ text with full-precision coordinates (round-trips exactly)."""
    lines = []
    for p in np.asarray(positions, dtype=np.float64):
        coords = " ".join(repr(float(x)) for x in p[:3])
        lines.append(f"v {coords}")
    if uv is not None:
        for t in np.asarray(uv, dtype=np.float64):
            lines.append(f"vt {float(t[0])!r} {float(t[1])!r}")
        for f in faces:
            lines.append("f " + " ".join(f"{v + 1}/{v + 1}" for v in f))
    else:
        for f in faces:
            lines.append("f " + " ".join(str(v + 1) for v in f))
    return "\n".join(lines) + "\n"


def write_obj(path, positions, faces, uv=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_obj(positions, faces, uv))


def read_obj_uv(path):
    """Read back positions, faces, and per-vertex vt records."""
    positions = []
    uvs = []
    faces = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            parts = raw.split("#", 1)[0].split()
            if not parts:
                continue
            if parts[0] == "v":
                positions.append([float(x) for x in parts[1:4]])
            elif parts[0] == "vt":
                uvs.append([float(parts[1]), float(parts[2])])
            elif parts[0] == "f":
                faces.append([int(t.split("/")[0]) - 1 for t in parts[1:4]])
    return (np.asarray(positions), np.asarray(faces, dtype=np.int64),
            np.asarray(uvs) if uvs else None)
