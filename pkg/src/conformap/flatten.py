"""Core flattening pipeline: complete boundary data, fit a closed curve, extend.

Given either boundary scale factors ``u`` or target exterior angles ``k``, the
complementary quantity is computed through the prefactored Laplacian, target
edge lengths are rescaled by the mean of the endpoint scale factors, a closed
polygon realizing the angles exactly is fit by minimally adjusting lengths,
and the polygon is extended over the interior (holomorphically or
harmonically).  One factorization, three backsolves per flattening.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import AngleSumViolation, NonPositiveLength
from .laplace import CotanMatrix, FactoredLaplace, build_laplace, factor
from .mesh import DiscreteCurvatures, DiskMesh, discrete_curvatures
from .steklov import (
    conjugate_extend,
    dirichlet_to_neumann,
    harmonic_extend,
    neumann_to_dirichlet,
)

ANGLE_SUM_TOL = 1e-9

SCALE_FACTORS = "scale_factors"
EXTERIOR_ANGLES = "exterior_angles"
HOLOMORPHIC = "holomorphic"
HARMONIC = "harmonic"


@dataclass
class BoundaryConditions:
    """Boundary data for a flattening; ``mode`` names the authoritative side."""

    mode: str
    u: np.ndarray | None = None
    k_target: np.ndarray | None = None
    extension: str = HOLOMORPHIC

    def __post_init__(self):
        if self.mode not in (SCALE_FACTORS, EXTERIOR_ANGLES):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.extension not in (HOLOMORPHIC, HARMONIC):
            raise ValueError(f"unknown extension {self.extension!r}")
        if self.mode == SCALE_FACTORS and self.u is None:
            raise ValueError("scale-factor mode requires u")
        if self.mode == EXTERIOR_ANGLES and self.k_target is None:
            raise ValueError("exterior-angle mode requires k_target")


@dataclass
class BoundaryCurve:
    """Closed boundary polygon: tangents, fitted lengths, vertex positions."""

    phases: np.ndarray          # cumulative tangent direction per edge
    tangents: np.ndarray        # (nb, 2) unit tangents
    lengths_target: np.ndarray  # requested edge lengths
    lengths_fit: np.ndarray     # closure-adjusted edge lengths
    positions: np.ndarray       # (nb, 2), first vertex at the origin


@dataclass
class Flattening:
    """Planar vertex coordinates plus provenance of how they were produced."""

    coords: np.ndarray          # (V, 2)
    mode: str
    extension: str
    iterations: int = 0
    trace: list = field(default_factory=list, repr=False)

    def boundary_coords(self, mesh: DiskMesh) -> np.ndarray:
        return self.coords[mesh.boundary_loop]


def target_lengths(mesh: DiskMesh, u: np.ndarray) -> np.ndarray:
    """Boundary edge lengths rescaled by the mean endpoint scale factor."""
    u = np.asarray(u, dtype=np.float64)
    u_next = np.roll(u, -1)
    return np.exp(0.5 * (u + u_next)) * mesh.boundary_edge_lengths


def best_fit_curve(k_target, lengths_target, dual_lengths, groups=None) -> BoundaryCurve:
    """Closed polygon achieving ``k_target`` exactly with minimally adjusted lengths.

    Minimizes ``sum_j (l*_j - l~_j)^2 / dual_j`` subject to closure; the
    constrained projection only needs a 2x2 solve.  ``groups`` may map several
    edges onto one shared length unknown (used for seam pairs).
    """
    k_target = np.asarray(k_target, dtype=np.float64)
    lengths_target = np.asarray(lengths_target, dtype=np.float64)
    dual_lengths = np.asarray(dual_lengths, dtype=np.float64)
    nb = len(k_target)
    total = k_target.sum()
    if abs(total - 2.0 * np.pi) > 1e-6:
        raise AngleSumViolation(f"exterior angles sum to {total}, expected 2*pi")

    phases = np.concatenate([[0.0], np.cumsum(k_target[1:])])
    tangents = np.stack([np.cos(phases), np.sin(phases)], axis=1)

    if groups is None:
        groups = np.arange(nb)
    else:
        groups = np.asarray(groups)
    _, group_idx = np.unique(groups, return_inverse=True)
    n_groups = group_idx.max() + 1

    weight = 1.0 / dual_lengths                      # per-edge mass
    mass = np.zeros(n_groups)
    np.add.at(mass, group_idx, weight)
    mean_target = np.zeros(n_groups)
    np.add.at(mean_target, group_idx, weight * lengths_target)
    mean_target /= mass
    t_sum = np.zeros((n_groups, 2))
    np.add.at(t_sum, group_idx, tangents)

    scaled = t_sum / mass[:, None]
    proj = t_sum.T @ scaled                          # 2x2
    rhs = t_sum.T @ mean_target
    # seam identifications can cancel tangent pairs exactly (e.g. a torus
    # fundamental polygon); closure then holds for any shared length, so the
    # correction must vanish along the degenerate directions
    U, sv, Vt = np.linalg.svd(proj)
    keep = sv > 1e-10 * lengths_target.sum()
    inv = np.where(keep, 1.0 / np.where(keep, sv, 1.0), 0.0)
    lam = -(Vt.T * inv) @ (U.T @ rhs)
    fitted = mean_target + scaled @ lam
    lengths_fit = fitted[group_idx]

    if (lengths_fit <= 0).any():
        bad = np.flatnonzero(lengths_fit <= 0)
        raise NonPositiveLength(
            f"{len(bad)} fitted boundary lengths are non-positive",
            edges=bad.tolist(),
            ratios=(lengths_fit[bad] / lengths_target[bad]).tolist(),
        )

    steps = lengths_fit[:, None] * tangents
    closure = np.linalg.norm(steps.sum(axis=0))
    if closure > 1e-10 * lengths_fit.sum():
        raise NonPositiveLength(f"curve failed to close: residual {closure}")
    positions = np.vstack([[0.0, 0.0], np.cumsum(steps[:-1], axis=0)])
    return BoundaryCurve(phases, tangents, lengths_target, lengths_fit, positions)


def extend_curve(fac: FactoredLaplace, curve: BoundaryCurve, kind: str) -> Flattening:
    """Extend the boundary polygon over the interior (two backsolves)."""
    re_part = curve.positions[:, 0]
    im_part = curve.positions[:, 1]
    a = harmonic_extend(fac, re_part)
    if kind == HOLOMORPHIC:
        b = conjugate_extend(fac, a)
    elif kind == HARMONIC:
        b = harmonic_extend(fac, im_part)
    else:
        raise ValueError(f"unknown extension {kind!r}")
    return Flattening(coords=np.stack([a, b], axis=1), mode="", extension=kind)


class Flattener:
    """Per-mesh session: curvature, cotan matrix, and the single factorization.

    Every flattening produced afterwards costs exactly three backsolves, so
    boundary data can be edited interactively against one shared factor.
    """

    def __init__(self, mesh: DiskMesh, regularization: float | None = None,
                 factored: FactoredLaplace | None = None):
        self.mesh = mesh
        self.curvatures: DiscreteCurvatures = discrete_curvatures(mesh)
        if factored is not None:
            self.matrix = factored.matrix
            self.factor = factored
        else:
            self.matrix: CotanMatrix = build_laplace(mesh)
            self.factor: FactoredLaplace = factor(self.matrix, regularization)
        self._source = -self.curvatures.omega  # flattening source term
        self.last_curve: BoundaryCurve | None = None
        self.last_bc: BoundaryConditions | None = None

    def complete(self, bc: BoundaryConditions) -> BoundaryConditions:
        """Fill in the non-authoritative half of the boundary data (one backsolve)."""
        k = self.curvatures.k
        if bc.mode == SCALE_FACTORS:
            u = np.asarray(bc.u, dtype=np.float64)
            h = dirichlet_to_neumann(self.factor, self._source, u)
            return replace(bc, u=u, k_target=k - h)
        k_target = np.asarray(bc.k_target, dtype=np.float64)
        total = k_target.sum()
        if abs(total - 2.0 * np.pi) > ANGLE_SUM_TOL:
            raise AngleSumViolation(
                f"target exterior angles sum to {total}, expected 2*pi"
            )
        u = neumann_to_dirichlet(self.factor, self._source, k - k_target)
        return replace(bc, u=u, k_target=k_target)

    def flatten(self, bc: BoundaryConditions, groups=None) -> Flattening:
        """Run the full pipeline for the given boundary data (three backsolves)."""
        bc = self.complete(bc)
        lengths = target_lengths(self.mesh, bc.u)
        curve = best_fit_curve(bc.k_target, lengths,
                               self.mesh.dual_boundary_lengths, groups=groups)
        flat = extend_curve(self.factor, curve, bc.extension)
        flat.mode = bc.mode
        self.last_curve = curve
        self.last_bc = bc
        return flat
