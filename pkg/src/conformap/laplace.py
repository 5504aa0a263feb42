"""Zero-Neumann cotan Laplace matrix, block partition, and reusable factors.

The matrix is assembled positive semidefinite (positive diagonal, kernel of
constants).  One :func:`factor` call yields both the full (Neumann) solver and
the interior-block (Dirichlet) solver; every subsequent problem is a backsolve.
Module-level counters track factorizations and solves so the amortization
contract can be asserted in tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse as sp
from scipy.sparse.linalg import splu

from .errors import DimensionMismatch, NotPositiveDefinite
from .mesh import DiskMesh, SurfaceMesh


@dataclass
class SolveCounters:
    factorizations: int = 0
    full_solves: int = 0
    interior_solves: int = 0

    def snapshot(self) -> dict:
        return {
            "factorizations": self.factorizations,
            "full_solves": self.full_solves,
            "interior_solves": self.interior_solves,
        }


#: Global instrumentation; tests snapshot/diff this around edit sessions.
counters = SolveCounters()


def assemble_cotan(mesh: SurfaceMesh, beta: np.ndarray | None = None) -> sp.csr_matrix:
    """Cotan matrix over all vertices; boundary edges carry one cotan term."""
    if beta is None:
        beta = mesh.corner_angles
    weights = np.zeros(len(mesh.edges))
    # corner c faces the edge (c+1, c+2) across the triangle
    np.add.at(weights, mesh.face_edges[:, [1, 2, 0]].ravel(),
              0.5 / np.tan(beta.ravel()))
    i, j = mesh.edges[:, 0], mesh.edges[:, 1]
    rows = np.concatenate([i, j, i, j])
    cols = np.concatenate([j, i, i, j])
    data = np.concatenate([-weights, -weights, weights, weights])
    n = mesh.n_vertices
    return sp.coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()


class CotanMatrix:
    """Cotan matrix of a disk mesh with addressable I/B blocks.

    Interior indices are sorted; boundary indices follow the boundary loop, so
    block-vector slots line up with boundary-ordered data everywhere else.
    """

    def __init__(self, mesh: DiskMesh, beta: np.ndarray | None = None):
        self.mesh = mesh
        self.A = assemble_cotan(mesh, beta)
        self.interior = mesh.interior_vertices
        self.boundary = mesh.boundary_loop
        rows_i = self.A[self.interior]
        rows_b = self.A[self.boundary]
        self.A_II = rows_i[:, self.interior].tocsr()
        self.A_IB = rows_i[:, self.boundary].tocsr()
        self.A_BB = rows_b[:, self.boundary].tocsr()

    @property
    def n(self) -> int:
        return self.A.shape[0]


def build_laplace(mesh: DiskMesh, beta: np.ndarray | None = None) -> CotanMatrix:
    return CotanMatrix(mesh, beta)


class FactoredLaplace:
    """Sparse factors of the full (regularized) matrix and its interior block.

    The full solve returns one representative of the up-to-constant solution
    family: the right-hand side is projected onto the range (mean removed) and
    one step of iterative refinement scrubs the regularization shift.
    """

    def __init__(self, matrix: CotanMatrix, regularization: float | None = None):
        self.matrix = matrix
        A = matrix.A.tocsc()
        diag_mean = A.diagonal().mean()
        if regularization is None:
            regularization = 1e-9 * diag_mean
        self.regularization = float(regularization)
        shifted = (A + self.regularization * sp.identity(A.shape[0], format="csc")).tocsc()
        try:
            self._full = splu(shifted)
            self._interior = (splu(matrix.A_II.tocsc())
                              if matrix.A_II.shape[0] else None)
        except RuntimeError as exc:
            raise NotPositiveDefinite(str(exc)) from exc
        self.n_full_solves = 0
        self.n_interior_solves = 0
        counters.factorizations += 1

    def solve_full(self, rhs: np.ndarray) -> np.ndarray:
        """Solve the Neumann-type system for the mean-free part of ``rhs``."""
        rhs = np.asarray(rhs, dtype=np.float64)
        if rhs.shape != (self.matrix.n,):
            raise DimensionMismatch(f"rhs has shape {rhs.shape}, expected ({self.matrix.n},)")
        b = rhs - rhs.mean()
        x = self._full.solve(b)
        x = x + self._full.solve(b - self.matrix.A @ x)
        self.n_full_solves += 1
        counters.full_solves += 1
        return x

    def solve_interior(self, rhs: np.ndarray) -> np.ndarray:
        rhs = np.asarray(rhs, dtype=np.float64)
        ni = len(self.matrix.interior)
        if rhs.shape != (ni,):
            raise DimensionMismatch(f"rhs has shape {rhs.shape}, expected ({ni},)")
        self.n_interior_solves += 1
        counters.interior_solves += 1
        if ni == 0:
            return np.zeros(0)
        x = self._interior.solve(rhs)
        x = x + self._interior.solve(rhs - self.matrix.A_II @ x)
        return x


def factor(matrix: CotanMatrix, regularization: float | None = None) -> FactoredLaplace:
    """Factor once; all later work is backsolves (see module counters)."""
    return FactoredLaplace(matrix, regularization)


def solve_semidefinite(A: sp.spmatrix, rhs: np.ndarray) -> np.ndarray:
    """One-shot solve of a PSD system with constant kernel, zero-mean result.

    Counts as a factorization; used outside the factor-once edit loop (e.g.
    the cone scale-factor solve on an uncut closed surface).
    """
    A = A.tocsc()
    rhs = np.asarray(rhs, dtype=np.float64)
    reg = 1e-9 * A.diagonal().mean()
    try:
        lu = splu((A + reg * sp.identity(A.shape[0], format="csc")).tocsc())
    except RuntimeError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    counters.factorizations += 1
    b = rhs - rhs.mean()
    x = lu.solve(b)
    x = x + lu.solve(b - A @ x)
    return x - x.mean()


def solve_dirichlet(A: sp.spmatrix, boundary: np.ndarray, rhs_interior: np.ndarray,
                    g: np.ndarray) -> np.ndarray:
    """One-shot Dirichlet solve on an arbitrary surface matrix.

    ``boundary`` lists the constrained vertices with values ``g``; returns the
    full vertex vector.  Counts as a factorization.
    """
    n = A.shape[0]
    mask = np.zeros(n, dtype=bool)
    mask[boundary] = True
    interior = np.flatnonzero(~mask)
    A = A.tocsr()
    A_II = A[interior][:, interior].tocsc()
    A_IB = A[interior][:, boundary].tocsr()
    try:
        lu = splu(A_II)
    except RuntimeError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    counters.factorizations += 1
    x = np.zeros(n)
    x[boundary] = g
    b = np.asarray(rhs_interior, dtype=np.float64) - A_IB @ g
    xi = lu.solve(b)
    xi = xi + lu.solve(b - A_II @ xi)
    x[interior] = xi
    return x
