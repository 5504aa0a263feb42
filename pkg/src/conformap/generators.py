"""Deterministic mesh generators used by tests and experiment scripts."""

from __future__ import annotations

import numpy as np
from scipy.spatial import Delaunay

from .mesh import DiskMesh, SurfaceMesh


def grid_mesh(nx: int, ny: int, width: float = 1.0, height: float = 1.0):
    """Flat rectangle grid, uniform diagonal split.  Returns (positions, faces)."""
    xs = np.linspace(0.0, width, nx + 1)
    ys = np.linspace(0.0, height, ny + 1)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    positions = np.stack([gx.ravel(), gy.ravel()], axis=1)

    def vid(i, j):
        return j * (nx + 1) + i

    faces = []
    for j in range(ny):
        for i in range(nx):
            v00, v10 = vid(i, j), vid(i + 1, j)
            v01, v11 = vid(i, j + 1), vid(i + 1, j + 1)
            faces.append((v00, v10, v11))
            faces.append((v00, v11, v01))
    return positions, np.asarray(faces, dtype=np.int64)


def crisscross_grid(nx: int, ny: int, width: float = 1.0, height: float = 1.0):
    """Mirror-symmetric grid: each cell split into four triangles at its center."""
    xs = np.linspace(0.0, width, nx + 1)
    ys = np.linspace(0.0, height, ny + 1)
    gx, gy = np.meshgrid(xs, ys, indexing="xy")
    positions = [np.stack([gx.ravel(), gy.ravel()], axis=1)]
    base = (nx + 1) * (ny + 1)
    centers = []
    faces = []

    def vid(i, j):
        return j * (nx + 1) + i

    for j in range(ny):
        for i in range(nx):
            c = base + len(centers)
            centers.append([(xs[i] + xs[i + 1]) / 2, (ys[j] + ys[j + 1]) / 2])
            v00, v10 = vid(i, j), vid(i + 1, j)
            v01, v11 = vid(i, j + 1), vid(i + 1, j + 1)
            faces += [(v00, v10, c), (v10, v11, c), (v11, v01, c), (v01, v00, c)]
    positions.append(np.asarray(centers))
    return np.vstack(positions), np.asarray(faces, dtype=np.int64)


def _polar_topology(n_rings: int):
    """Hex-lattice disk connectivity: ring r has 6r vertices around a center."""
    ring_start = [0] + [1 + 3 * r * (r - 1) for r in range(1, n_rings + 2)]

    def node(r, m):
        if r == 0:
            return 0
        return ring_start[r] + m % (6 * r)

    faces = []
    for r in range(n_rings):
        for s in range(6):
            inner = [node(r, s * r + t) for t in range(r + 1)]
            outer = [node(r + 1, s * (r + 1) + t) for t in range(r + 2)]
            for t in range(r + 1):
                faces.append((outer[t], outer[t + 1], inner[t]))
            for t in range(r):
                faces.append((inner[t], outer[t + 1], inner[t + 1]))
    n_vertices = ring_start[n_rings + 1]
    return np.asarray(faces, dtype=np.int64), n_vertices, ring_start


def _polar_params(n_rings: int, jitter: float = 0.0, rng=None):
    """(radius fraction, azimuth) per vertex of the polar topology."""
    _, n_vertices, ring_start = _polar_topology(n_rings)
    frac = np.zeros(n_vertices)
    azim = np.zeros(n_vertices)
    if jitter and rng is None:
        rng = np.random.default_rng(0)
    for r in range(1, n_rings + 1):
        m = 6 * r
        idx = np.arange(ring_start[r], ring_start[r] + m)
        frac[idx] = r / n_rings
        azim[idx] = 2.0 * np.pi * np.arange(m) / m
        if jitter:
            azim[idx] += jitter * (2.0 * np.pi / m) * rng.uniform(-1, 1, m)
            if r < n_rings:  # keep the rim exactly circular
                frac[idx] += jitter * (1.0 / n_rings) * rng.uniform(-1, 1, m)
    return frac, azim


def polar_disk(n_rings: int, radius: float = 1.0, jitter: float = 0.0, rng=None):
    """Flat disk with a circular boundary; 6*n_rings^2 faces."""
    faces, _, _ = _polar_topology(n_rings)
    frac, azim = _polar_params(n_rings, jitter, rng)
    rho = frac * radius
    positions = np.stack([rho * np.cos(azim), rho * np.sin(azim)], axis=1)
    return positions, faces


def spherical_cap(n_rings: int, theta_max: float = np.pi / 2, radius: float = 1.0,
                  jitter: float = 0.0, rng=None):
    """Cap of a sphere (theta_max = pi/2 gives a hemisphere)."""
    faces, _, _ = _polar_topology(n_rings)
    frac, azim = _polar_params(n_rings, jitter, rng)
    theta = frac * theta_max
    positions = radius * np.stack(
        [np.sin(theta) * np.cos(azim), np.sin(theta) * np.sin(azim), np.cos(theta)],
        axis=1,
    )
    return positions, faces


def hemisphere(n_rings: int, radius: float = 1.0, jitter: float = 0.0, rng=None):
    return spherical_cap(n_rings, np.pi / 2, radius, jitter, rng)


def icosphere(subdivisions: int = 1, radius: float = 1.0):
    """Closed genus-0 sphere: subdivided icosahedron projected to the sphere."""
    phi = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.asarray([
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ], dtype=np.float64)
    faces = np.asarray([
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ], dtype=np.int64)
    verts = [tuple(v) for v in verts]
    for _ in range(subdivisions):
        cache = {}
        new_faces = []

        def midpoint(a, b):
            key = (a, b) if a < b else (b, a)
            if key not in cache:
                pa, pb = np.asarray(verts[a]), np.asarray(verts[b])
                verts.append(tuple((pa + pb) / 2.0))
                cache[key] = len(verts) - 1
            return cache[key]

        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = np.asarray(new_faces, dtype=np.int64)
    positions = np.asarray(verts)
    positions *= radius / np.linalg.norm(positions, axis=1, keepdims=True)
    return positions, faces


def torus_mesh(n_major: int = 16, n_minor: int = 8, R: float = 2.0, r: float = 0.7):
    """Closed genus-1 torus grid."""
    u = 2.0 * np.pi * np.arange(n_major) / n_major
    v = 2.0 * np.pi * np.arange(n_minor) / n_minor
    uu, vv = np.meshgrid(u, v, indexing="ij")
    positions = np.stack([
        (R + r * np.cos(vv)) * np.cos(uu),
        (R + r * np.cos(vv)) * np.sin(uu),
        r * np.sin(vv),
    ], axis=2).reshape(-1, 3)

    def vid(i, j):
        return (i % n_major) * n_minor + (j % n_minor)

    faces = []
    for i in range(n_major):
        for j in range(n_minor):
            a, b = vid(i, j), vid(i + 1, j)
            c, d = vid(i + 1, j + 1), vid(i, j + 1)
            faces.append((a, b, c))
            faces.append((a, c, d))
    return positions, np.asarray(faces, dtype=np.int64)


def annulus_mesh(n_rings: int = 4, n_around: int = 24, r_inner: float = 0.5,
                 r_outer: float = 1.0):
    """Flat annulus (two boundary loops)."""
    radii = np.linspace(r_inner, r_outer, n_rings + 1)
    theta = 2.0 * np.pi * np.arange(n_around) / n_around
    positions = np.stack([
        np.outer(radii, np.cos(theta)).ravel(),
        np.outer(radii, np.sin(theta)).ravel(),
    ], axis=1)

    def vid(i, j):
        return i * n_around + (j % n_around)

    faces = []
    for i in range(n_rings):
        for j in range(n_around):
            a, b = vid(i, j), vid(i, j + 1)
            c, d = vid(i + 1, j + 1), vid(i + 1, j)
            faces.append((a, b, c))
            faces.append((a, c, d))
    return positions, np.asarray(faces, dtype=np.int64)


def random_disk_mesh(rng, target_vertices: int = 400, bump: float = 0.25):
    """Random curved disk: jittered grid in a circle, Delaunay, smooth z-lift."""
    m = max(int(np.sqrt(target_vertices * 4 / np.pi)), 4)
    spacing = 2.0 / m
    xs = np.linspace(-1, 1, m + 1)
    gx, gy = np.meshgrid(xs, xs, indexing="xy")
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    pts += rng.uniform(-0.28, 0.28, pts.shape) * spacing
    pts = pts[np.linalg.norm(pts, axis=1) < 1.0 - 0.7 * spacing]
    n_rim = int(np.ceil(2.0 * np.pi / spacing))
    ang = 2.0 * np.pi * (np.arange(n_rim) + rng.uniform(0, 1)) / n_rim
    rim = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    pts = np.vstack([pts, rim])

    tri = Delaunay(pts)
    faces = tri.simplices.astype(np.int64)
    # enforce counter-clockwise orientation
    e1 = pts[faces[:, 1]] - pts[faces[:, 0]]
    e2 = pts[faces[:, 2]] - pts[faces[:, 0]]
    flip = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0] < 0
    faces[flip] = faces[flip][:, [0, 2, 1]]

    a, b = rng.uniform(1.0, 3.0, 2)
    p, q = rng.uniform(0, 2 * np.pi, 2)
    z = bump * np.sin(a * pts[:, 0] + p) * np.cos(b * pts[:, 1] + q)
    positions = np.column_stack([pts, z])
    return positions, faces


def disk_mesh_from(generator_output) -> DiskMesh:
    positions, faces = generator_output
    return DiskMesh.from_positions(positions, faces)


def surface_mesh_from(generator_output) -> SurfaceMesh:
    positions, faces = generator_output
    return SurfaceMesh.from_positions(positions, faces)
