"""Map-quality measurement: quasi-conformal error, scale distortion, flips."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .mesh import SurfaceMesh


@dataclass
class QualityReport:
    """Per-face and aggregate distortion of a planar layout.

    ``q`` is the singular-value ratio of the per-face differential (1 is
    conformal); ``q_avg`` weights by source area.  ``u`` is the recovered
    zero-mean log scale per vertex.
    """

    q: np.ndarray
    q_avg: float
    q_max: float
    u: np.ndarray
    flipped_faces: list = field(default_factory=list)
    flipped_area_fraction: float = 0.0
    degenerate_faces: list = field(default_factory=list)

    def to_dict(self, include_per_face: bool = False) -> dict:
        out = {
            "qAvg": self.q_avg,
            "qMax": self.q_max,
            "flippedFaces": self.flipped_faces,
            "flippedAreaFraction": self.flipped_area_fraction,
            "degenerateFaces": self.degenerate_faces,
            "uMin": float(self.u.min()),
            "uMax": float(self.u.max()),
        }
        if include_per_face:
            out["q"] = self.q.tolist()
            out["u"] = self.u.tolist()
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(**kwargs))


def _source_frames(mesh: SurfaceMesh):
    """Lay each source triangle out in 2D from its edge lengths.

    Corner 0 at the origin, corner 1 at (l01, 0), corner 2 above the axis.
    Returns the edge matrix entries (l01, x2, y2).
    """
    ell = mesh.edge_lengths[mesh.face_edges]       # (F,3): l01, l12, l20
    l01, l12, l20 = ell[:, 0], ell[:, 1], ell[:, 2]
    x2 = (l01 * l01 + l20 * l20 - l12 * l12) / (2.0 * l01)
    y2 = np.sqrt(np.maximum(l20 * l20 - x2 * x2, 0.0))
    return l01, x2, y2


def quasi_conformal_error(mesh: SurfaceMesh, coords) -> QualityReport:
    """Quality report for a layout (a Flattening or a (V, 2) coordinate array)."""
    coords = getattr(coords, "coords", coords)
    coords = np.asarray(coords, dtype=np.float64)
    faces = mesh.faces
    l01, x2, y2 = _source_frames(mesh)

    p0, p1, p2 = coords[faces[:, 0]], coords[faces[:, 1]], coords[faces[:, 2]]
    e1 = p1 - p0
    e2 = p2 - p0
    # M = [e1 e2] @ inv([[l01, x2], [0, y2]])
    det_s = l01 * y2
    m11 = e1[:, 0] * y2 / det_s
    m21 = e1[:, 1] * y2 / det_s
    m12 = (-e1[:, 0] * x2 + e2[:, 0] * l01) / det_s
    m22 = (-e1[:, 1] * x2 + e2[:, 1] * l01) / det_s

    a = 0.5 * (m11 + m22)
    b = 0.5 * (m11 - m22)
    c = 0.5 * (m21 + m12)
    d = 0.5 * (m21 - m12)
    big = np.sqrt(a * a + d * d) + np.sqrt(b * b + c * c)
    small = np.abs(np.sqrt(a * a + d * d) - np.sqrt(b * b + c * c))

    det = m11 * m22 - m12 * m21
    areas = mesh.face_areas
    degenerate = np.flatnonzero(small <= 1e-300)
    with np.errstate(divide="ignore"):
        q = np.where(small > 0, big / np.maximum(small, 1e-300), np.inf)
    flipped = np.flatnonzero((det <= 0) & (areas > 0))

    valid = small > 1e-300
    if valid.any() and areas[valid].sum() > 0:
        q_avg = float((q[valid] * areas[valid]).sum() / areas[valid].sum())
        q_max = float(q[valid].max())
    else:
        q_avg = q_max = np.inf
    flipped_area = float(areas[flipped].sum() / areas.sum()) if len(flipped) else 0.0

    u = _scale_from_map(mesh, coords)
    return QualityReport(
        q=q, q_avg=q_avg, q_max=q_max, u=u,
        flipped_faces=flipped.tolist(),
        flipped_area_fraction=flipped_area,
        degenerate_faces=degenerate.tolist(),
    )


def _scale_from_map(mesh: SurfaceMesh, coords: np.ndarray) -> np.ndarray:
    """Per-vertex log scale from per-edge length ratios, area-weighted zero mean."""
    i, j = mesh.edges[:, 0], mesh.edges[:, 1]
    image_len = np.linalg.norm(coords[j] - coords[i], axis=1)
    with np.errstate(divide="ignore"):
        lam = np.log(np.maximum(image_len, 1e-300) / mesh.edge_lengths)
    w = image_len
    num = np.zeros(mesh.n_vertices)
    den = np.zeros(mesh.n_vertices)
    np.add.at(num, i, w * lam)
    np.add.at(num, j, w * lam)
    np.add.at(den, i, w)
    np.add.at(den, j, w)
    u = num / np.maximum(den, 1e-300)
    mass = np.zeros(mesh.n_vertices)
    np.add.at(mass, mesh.faces.ravel(), np.repeat(mesh.face_areas / 3.0, 3))
    return u - (mass * u).sum() / mass.sum()


def convergence_study(generator, levels, flatten_fn=None):
    """Refinement study: rows of (h, q_avg - 1, q_max) plus the log-log slope.

    ``generator(level)`` must yield a :class:`DiskMesh` of a fixed smooth
    surface at increasing resolution; ``flatten_fn(mesh)`` defaults to the
    automatic zero-scale-factor flattening.
    """
    from .apps import flatten_auto
    from .flatten import Flattener

    if flatten_fn is None:
        def flatten_fn(mesh):
            return flatten_auto(Flattener(mesh)), mesh

    rows = []
    for level in levels:
        mesh = generator(level)
        flat, mesh = flatten_fn(mesh)
        report = quasi_conformal_error(mesh, flat.coords)
        rows.append({
            "level": level,
            "h": mesh.mean_edge_length,
            "q_avg_minus_1": report.q_avg - 1.0,
            "q_max": report.q_max,
        })
    hs = np.array([r["h"] for r in rows])
    errs = np.array([r["q_avg_minus_1"] for r in rows])
    if (errs > 0).all():
        slope = float(np.polyfit(np.log(hs), np.log(errs), 1)[0])
    else:
        slope = float("nan")
    return rows, slope


def study_rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["level", "h", "q_avg_minus_1", "q_max"])
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
