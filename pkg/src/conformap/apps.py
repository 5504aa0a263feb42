"""Application recipes built on the core pipeline.

Each recipe only constructs boundary data (scale factors or exterior angles)
and calls the shared flattener; the iterative drivers re-use the single
factorization, performing backsolves only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import (
    AngleSumViolation,
    ConeSumViolation,
    NoConvergence,
    WindingMismatch,
)
from .flatten import (
    EXTERIOR_ANGLES,
    HARMONIC,
    HOLOMORPHIC,
    SCALE_FACTORS,
    BoundaryConditions,
    Flattener,
    Flattening,
)
from .laplace import assemble_cotan, solve_dirichlet, solve_semidefinite
from .mesh import DiskMesh, SeamMap, SurfaceMesh, cut_to_disk

TWO_PI = 2.0 * np.pi


def flatten_auto(flattener: Flattener, extension: str = HOLOMORPHIC) -> Flattening:
    """Minimal-area-distortion flattening: zero boundary scale factors."""
    u = np.zeros(flattener.mesh.n_boundary)
    return flattener.flatten(BoundaryConditions(SCALE_FACTORS, u=u, extension=extension))


def angles_from_directions(theta: np.ndarray) -> np.ndarray:
    """Exterior angles from per-edge tangent directions.

    ``theta[j]`` is the direction of boundary edge j; the turn at vertex j is
    the minimal-magnitude representative of ``theta[j] - theta[j-1]`` in
    (-pi, pi].  The directions must wind exactly once.
    """
    theta = np.asarray(theta, dtype=np.float64)
    diff = theta - np.roll(theta, 1)
    k = np.pi - np.mod(np.pi - diff, TWO_PI)
    total = k.sum()
    if abs(total - TWO_PI) > 1e-6:
        raise WindingMismatch(f"total turning {total} != 2*pi")
    return k


def scale_factors_from_lengths(mesh: DiskMesh, target_lengths: np.ndarray) -> np.ndarray:
    """Per-vertex scale factors from per-edge target lengths.

    Per-edge log ratios are averaged at each vertex with target-length
    weights: ``u_j = (l~_ij u_ij + l~_jk u_jk) / (l~_ij + l~_jk)``.
    """
    target_lengths = np.asarray(target_lengths, dtype=np.float64)
    if (target_lengths <= 0).any():
        raise ValueError("target lengths must be positive")
    u_edge = np.log(target_lengths / mesh.boundary_edge_lengths)
    l_in, u_in = np.roll(target_lengths, 1), np.roll(u_edge, 1)
    return (l_in * u_in + target_lengths * u_edge) / (l_in + target_lengths)


def flatten_sharp(flattener: Flattener, corners: dict, extension: str = HARMONIC,
                  fill: np.ndarray | None = None) -> Flattening:
    """Flatten with exact exterior angles at marked boundary vertices.

    ``corners`` maps vertex ids to exterior angles; unmarked vertices share
    the remaining turning uniformly (or take ``fill`` values, rescaled so the
    total is exactly 2*pi).  Harmonic extension interpolates the polygon, so
    the requested angles appear exactly in the layout.
    """
    mesh = flattener.mesh
    nb = mesh.n_boundary
    pos = mesh.boundary_position
    k_target = np.full(nb, np.nan)
    for vertex, angle in corners.items():
        p = pos[int(vertex)]
        if p < 0:
            raise ValueError(f"corner vertex {vertex} is not on the boundary")
        k_target[p] = float(angle)
    marked = ~np.isnan(k_target)
    residual = TWO_PI - k_target[marked].sum()
    n_free = int((~marked).sum())
    if n_free == 0:
        if abs(residual) > 1e-9:
            raise AngleSumViolation(f"marked corners sum to {TWO_PI - residual}")
    else:
        if fill is None:
            k_target[~marked] = residual / n_free
        else:
            fill = np.asarray(fill, dtype=np.float64)[~marked]
            total = fill.sum()
            if abs(total) < 1e-12 or residual * total <= 0:
                k_target[~marked] = residual / n_free
            else:
                k_target[~marked] = fill * (residual / total)
    bc = BoundaryConditions(EXTERIOR_ANGLES, k_target=k_target, extension=extension)
    return flattener.flatten(bc)


@dataclass
class ConeFlattening:
    """Result of a cone flattening: the layout plus the cut correspondence."""

    flattening: Flattening
    disk: DiskMesh
    seams: SeamMap
    flattener: Flattener
    scale_factors: np.ndarray  # on the uncut surface

    def cone_angle_sums(self, cones) -> dict:
        """Measured layout angle around each cone (sum over all copies)."""
        angles = geometry.layout_corner_angles(self.disk.faces, self.flattening.coords)
        sums = np.zeros(self.disk.n_vertices)
        np.add.at(sums, self.disk.faces.ravel(), angles.ravel())
        return {int(c): float(sums[self.seams.copies_of(int(c))].sum()) for c in cones}


def flatten_cones(surface: SurfaceMesh, cones: dict) -> ConeFlattening:
    """Seamless cone flattening of a closed surface or disk.

    Scale factors are solved on the uncut surface with the cone defects as
    curvature targets, the surface is cut through all cones, and the cut disk
    is flattened with those scale factors prescribed along the whole boundary.
    Seam-paired edges share a single length unknown, and harmonic extension
    preserves the fitted polygon exactly.
    """
    theta = np.zeros(surface.n_vertices)
    for vertex, defect in cones.items():
        theta[int(vertex)] = float(defect)

    closed = len(surface.boundary_loops) == 0
    A = assemble_cotan(surface)
    source = theta - surface.angle_defect
    if closed:
        expected = TWO_PI * surface.euler_characteristic
        if abs(theta.sum() - expected) > 1e-9:
            raise ConeSumViolation(
                f"cone defects sum to {theta.sum()}, Gauss-Bonnet requires {expected}"
            )
        u0 = solve_semidefinite(A, source)
    else:
        boundary = np.concatenate(surface.boundary_loops)
        mask = np.zeros(surface.n_vertices, dtype=bool)
        mask[boundary] = True
        u0 = solve_dirichlet(A, boundary, source[~mask], np.zeros(len(boundary)))

    disk, seams = cut_to_disk(surface, cones=sorted(int(c) for c in cones))
    u_boundary = u0[seams.vertex_origin[disk.boundary_loop]]
    flattener = Flattener(disk)
    groups = seams.boundary_edge_groups(disk.n_boundary)
    bc = BoundaryConditions(SCALE_FACTORS, u=u_boundary, extension=HARMONIC)
    flat = flattener.flatten(bc, groups=groups)
    return ConeFlattening(flat, disk, seams, flattener, u0)


def uniformize_disk(flattener: Flattener, max_iterations: int = 20,
                    damping: float = 0.5, tol: float = 1e-3) -> Flattening:
    """Map the disk onto the round unit disk by fixed-point iteration.

    Each round prescribes exterior angles proportional to the current layout's
    dual boundary lengths, averaged with the previous angles.  The initial
    guess is the input geodesic curvature, shifted to satisfy the 2*pi total.
    """
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")
    nb = flattener.mesh.n_boundary
    k = flattener.curvatures.k
    k_prev = k + (TWO_PI - k.sum()) / nb
    trace = []
    flat = None
    for iteration in range(1, max_iterations + 1):
        if flat is None:
            k_next = k_prev
        else:
            p = flat.boundary_coords(flattener.mesh)
            seg = np.linalg.norm(np.roll(p, -1, axis=0) - p, axis=1)
            dual = 0.5 * (np.roll(seg, 1) + seg)
            raw = TWO_PI * dual / dual.sum()
            k_next = damping * raw + (1.0 - damping) * k_prev
            k_next += (TWO_PI - k_next.sum()) / nb
        bc = BoundaryConditions(EXTERIOR_ANGLES, k_target=k_next, extension=HARMONIC)
        flat = flattener.flatten(bc)
        k_prev = k_next
        boundary = flat.boundary_coords(flattener.mesh)
        deviation = geometry.circle_deviation(boundary)
        trace.append({
            "deviation": deviation,
            "turning": geometry.polygon_turning(boundary),
        })
        if deviation <= tol:
            flat.iterations = iteration
            flat.trace = trace
            return flat
    raise NoConvergence(
        f"circle deviation {trace[-1]['deviation']:.3g} > {tol} "
        f"after {max_iterations} iterations"
    )


@dataclass
class TargetCurve:
    """Closed planar polyline with an arc-length sampler."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 3:
            raise ValueError("target curve needs at least 3 planar points")
        if np.allclose(pts[0], pts[-1]):
            pts = pts[:-1]
        # normalize to counter-clockwise traversal (positive signed area)
        nxt = np.roll(pts, -1, axis=0)
        if (pts[:, 0] * nxt[:, 1] - pts[:, 1] * nxt[:, 0]).sum() < 0:
            pts = pts[::-1].copy()
        self.points = pts
        seg = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
        if (seg <= 0).any():
            raise ValueError("target curve has a zero-length segment")
        self.segment_lengths = seg
        self.cumulative = np.concatenate([[0.0], np.cumsum(seg)])
        self.total_length = float(self.cumulative[-1])
        self._check_simple()

    def _check_simple(self):
        pts = self.points
        m = len(pts)
        if m > 2000:
            return
        a = pts
        b = np.roll(pts, -1, axis=0)
        for i in range(m):
            d1 = b[i] - a[i]
            js = np.arange(i + 2, m if i > 0 else m - 1)
            if len(js) == 0:
                continue
            d2 = b[js] - a[js]
            w = a[js] - a[i]
            denom = d1[0] * d2[:, 1] - d1[1] * d2[:, 0]
            ok = np.abs(denom) > 1e-14
            safe = np.where(ok, denom, 1.0)
            t = np.where(ok, (w[:, 0] * d2[:, 1] - w[:, 1] * d2[:, 0]) / safe, -1)
            s = np.where(ok, (w[:, 0] * d1[1] - w[:, 1] * d1[0]) / safe, -1)
            if ((t > 1e-12) & (t < 1 - 1e-12) & (s > 1e-12) & (s < 1 - 1e-12)).any():
                raise ValueError("target curve self-intersects")

    def sample(self, s: np.ndarray) -> np.ndarray:
        """Points at arc length ``s`` (wrapped into [0, total_length))."""
        s = np.mod(np.asarray(s, dtype=np.float64), self.total_length)
        idx = np.clip(np.searchsorted(self.cumulative, s, side="right") - 1,
                      0, len(self.points) - 1)
        t = (s - self.cumulative[idx]) / self.segment_lengths[idx]
        nxt = (idx + 1) % len(self.points)
        return self.points[idx] + t[:, None] * (self.points[nxt] - self.points[idx])


def flatten_to_curve(flattener: Flattener, target: TargetCurve,
                     max_iterations: int = 20, tol: float = 1e-4) -> Flattening:
    """Flatten onto an arbitrary closed target shape.

    Per round: sample the target at arc-length intervals proportional to the
    current boundary edge lengths, read the sampled polygon's exterior angles
    off as curvature data, and re-flatten.  Stops when the boundary moves less
    than ``tol`` times the image diameter between rounds.
    """
    if max_iterations < 1:
        raise ValueError("max_iterations must be at least 1")
    mesh = flattener.mesh
    nb = mesh.n_boundary
    u0 = np.zeros(nb)
    flat = flattener.flatten(BoundaryConditions(SCALE_FACTORS, u=u0, extension=HARMONIC))
    trace = []
    for iteration in range(1, max_iterations + 1):
        p = flat.boundary_coords(mesh)
        seg = np.linalg.norm(np.roll(p, -1, axis=0) - p, axis=1)
        s = np.concatenate([[0.0], np.cumsum(seg[:-1])])
        z = target.sample(s * (target.total_length / seg.sum()))
        d = np.roll(z, -1, axis=0) - z
        norms = np.linalg.norm(d, axis=1)
        if (norms <= 1e-14 * target.total_length).any():
            raise NoConvergence("coincident samples on the target curve")
        zc = d[:, 0] + 1j * d[:, 1]
        k_target = np.angle(zc / np.roll(zc, 1))
        turning = k_target.sum()
        if abs(turning - TWO_PI) > 1e-6:
            raise NoConvergence(f"sampled polygon turns by {turning}, not 2*pi")
        k_target += (TWO_PI - turning) / nb
        bc = BoundaryConditions(EXTERIOR_ANGLES, k_target=k_target, extension=HARMONIC)
        new_flat = flattener.flatten(bc)
        q = new_flat.boundary_coords(mesh)
        displacement = float(np.linalg.norm(q - p, axis=1).max())
        scale = geometry.diameter(p)
        aligned = geometry.align_similarity(q, z)
        trace.append({
            "turning": turning,
            "displacement": displacement / scale,
            "target_distance": float(np.linalg.norm(aligned - z, axis=1).max()),
        })
        flat = new_flat
        if displacement <= tol * scale:
            flat.iterations = iteration
            flat.trace = trace
            return flat
    raise NoConvergence(
        f"boundary displacement {trace[-1]['displacement']:.3g} > {tol} "
        f"after {max_iterations} iterations"
    )
