"""Small planar geometry utilities shared by drivers, metrics, and tests."""

from __future__ import annotations

import numpy as np


def polygon_exterior_angles(points: np.ndarray) -> np.ndarray:
    """Signed turn at each vertex of a closed polygon, in (-pi, pi]."""
    points = np.asarray(points, dtype=np.float64)
    d = np.roll(points, -1, axis=0) - points          # edge j: v_j -> v_{j+1}
    prev = np.roll(d, 1, axis=0)
    cross = prev[:, 0] * d[:, 1] - prev[:, 1] * d[:, 0]
    dot = (prev * d).sum(axis=1)
    return np.arctan2(cross, dot)


def polygon_turning(points: np.ndarray) -> float:
    return float(polygon_exterior_angles(points).sum())


def fit_circle(points: np.ndarray):
    """Algebraic least-squares circle fit; returns (center, radius)."""
    points = np.asarray(points, dtype=np.float64)
    x, y = points[:, 0], points[:, 1]
    A = np.column_stack([x, y, np.ones(len(points))])
    b = x * x + y * y
    (d, e, f), *_ = np.linalg.lstsq(A, b, rcond=None)
    center = np.array([d / 2.0, e / 2.0])
    radius = np.sqrt(max(f + center @ center, 0.0))
    return center, radius


def circle_deviation(points: np.ndarray) -> float:
    """Max relative radial deviation of points from their best-fit circle."""
    center, radius = fit_circle(points)
    r = np.linalg.norm(points - center, axis=1)
    return float(np.abs(r - radius).max() / radius)


def align_rigid(source: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Best rotation+translation (no reflection) of ``source`` onto ``target``."""
    source = np.asarray(source, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)[:, :2]
    sc, tc = source.mean(axis=0), target.mean(axis=0)
    H = (source - sc).T @ (target - tc)
    U, _, Vt = np.linalg.svd(H)
    R = (U @ Vt).T
    if np.linalg.det(R) < 0:
        U[:, -1] *= -1
        R = (U @ Vt).T
    return (source - sc) @ R.T + tc


def align_similarity(source: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Best scale+rotation+translation of ``source`` onto ``target``."""
    source = np.asarray(source, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)[:, :2]
    sc, tc = source.mean(axis=0), target.mean(axis=0)
    src, tgt = source - sc, target - tc
    H = src.T @ tgt
    U, S, Vt = np.linalg.svd(H)
    det = np.sign(np.linalg.det(U @ Vt))
    D = np.diag([1.0, det])
    R = (U @ D @ Vt).T
    scale = (S * np.diag(D)).sum() / (src * src).sum()
    return scale * src @ R.T + tc


def layout_corner_angles(faces: np.ndarray, coords: np.ndarray) -> np.ndarray:
    """Unsigned angle at each face corner of a planar layout, shape (F, 3)."""
    p = coords[faces]                                  # (F, 3, 2)
    out = np.empty((len(faces), 3))
    for c in range(3):
        u = p[:, (c + 1) % 3] - p[:, c]
        v = p[:, (c + 2) % 3] - p[:, c]
        cross = np.abs(u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])
        dot = (u * v).sum(axis=1)
        out[:, c] = np.arctan2(cross, dot)
    return out


def diameter(points: np.ndarray) -> float:
    """Diagonal of the bounding box (cheap stand-in for the true diameter)."""
    points = np.asarray(points, dtype=np.float64)
    return float(np.linalg.norm(points.max(axis=0) - points.min(axis=0)))
