"""Boundary-data exchange operators and interior extensions.

All boundary vectors follow the boundary loop order of the underlying mesh.
Neumann data is always integrated over dual boundary edges; pointwise normal
derivatives never appear.  Sign conventions follow the positive-semidefinite
cotan matrix: the Neumann problem reads ``A x = phi - [0; h]`` (boundary rows
carry ``phi_B - h``) and the flattening source term is ``phi = -omega``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .laplace import FactoredLaplace


def _check_boundary(fac: FactoredLaplace, values: np.ndarray, name: str) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    nb = len(fac.matrix.boundary)
    if values.shape != (nb,):
        raise DimensionMismatch(f"{name} has shape {values.shape}, expected ({nb},)")
    return values


def _check_vertex(fac: FactoredLaplace, values: np.ndarray, name: str) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (fac.matrix.n,):
        raise DimensionMismatch(f"{name} has shape {values.shape}, expected ({fac.matrix.n},)")
    return values


def dirichlet_to_neumann(fac: FactoredLaplace, phi: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Neumann data that reproduces the Dirichlet solution of ``A x = phi``.

    Evaluates ``phi_B - A_IB^T a - A_BB g`` with ``a`` the interior Dirichlet
    solve, i.e. one backsolve plus sparse products.
    """
    phi = _check_vertex(fac, phi, "phi")
    g = _check_boundary(fac, g, "g")
    m = fac.matrix
    a = fac.solve_interior(phi[m.interior] - m.A_IB @ g)
    return phi[m.boundary] - m.A_IB.T @ a - m.A_BB @ g


def neumann_to_dirichlet(fac: FactoredLaplace, phi: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Boundary values of the Neumann solution, zero-mean over the boundary."""
    phi = _check_vertex(fac, phi, "phi")
    h = _check_boundary(fac, h, "h")
    rhs = phi.copy()
    rhs[fac.matrix.boundary] -= h
    x = fac.solve_full(rhs)
    g = x[fac.matrix.boundary]
    return g - g.mean()


def harmonic_extend(fac: FactoredLaplace, g: np.ndarray) -> np.ndarray:
    """Harmonic interior extension of boundary values ``g`` (interpolates exactly)."""
    g = _check_boundary(fac, g, "g")
    m = fac.matrix
    a = np.zeros(m.n)
    a[m.boundary] = g
    if len(m.interior):
        a[m.interior] = fac.solve_interior(-(m.A_IB @ g))
    return a


def hilbert_transform(a_boundary: np.ndarray) -> np.ndarray:
    """Neumann data of the least-squares harmonic conjugate.

    ``h_j = (a_{j+1} - a_{j-1}) / 2`` around the loop; the result telescopes
    to an exact zero sum.
    """
    a = np.asarray(a_boundary, dtype=np.float64)
    return 0.5 * (np.roll(a, -1) - np.roll(a, 1))


def conjugate_extend(fac: FactoredLaplace, a: np.ndarray) -> np.ndarray:
    """Harmonic conjugate of a harmonic function ``a``, zero-mean over vertices.

    Solves the Neumann problem whose data is the Hilbert transform of the
    boundary trace of ``a``; the pair minimizes the conformal energy over all
    functions with ``a`` fixed.
    """
    a = _check_vertex(fac, a, "a")
    m = fac.matrix
    h = hilbert_transform(a[m.boundary])
    rhs = np.zeros(m.n)
    rhs[m.boundary] = -h
    b = fac.solve_full(rhs)
    return b - b.mean()
