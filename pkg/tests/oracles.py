"""Independent dense references used to check the sparse pipeline.

Everything here is assembled with plain numpy on dense matrices, using
formulas that avoid the library's code paths: cotangents come from the
quadrance identity cot = (a^2 + b^2 - c^2) / (4 * area) instead of arccos,
solves use numpy.linalg directly, and the constrained length fit uses SLSQP.
"""

import numpy as np
from scipy.optimize import minimize


def heron_area(a, b, c):
    s = (a + b + c) / 2.0
    return np.sqrt(max(s * (s - a) * (s - b) * (s - c), 0.0))


def dense_cotan(mesh):
    """Dense zero-Neumann cotan matrix."""
    n = mesh.n_vertices
    A = np.zeros((n, n))
    for tri in mesh.faces:
        i, j, k = (int(v) for v in tri)
        lij = mesh.edge_lengths[mesh.edge_index(i, j)]
        ljk = mesh.edge_lengths[mesh.edge_index(j, k)]
        lki = mesh.edge_lengths[mesh.edge_index(k, i)]
        area = heron_area(lij, ljk, lki)
        # cot of the corner opposite each edge, from squared lengths
        for (a, b), opposite, adjacent in (
            ((i, j), lij, (ljk, lki)),
            ((j, k), ljk, (lki, lij)),
            ((k, i), lki, (lij, ljk)),
        ):
            cot = (adjacent[0] ** 2 + adjacent[1] ** 2 - opposite ** 2) / (4.0 * area)
            w = 0.5 * cot
            A[a, b] -= w
            A[b, a] -= w
            A[a, a] += w
            A[b, b] += w
    return A


def dense_dirichlet_solve(A, interior, boundary, phi, g):
    """Interior values of the Dirichlet-Poisson problem."""
    A_II = A[np.ix_(interior, interior)]
    A_IB = A[np.ix_(interior, boundary)]
    return np.linalg.solve(A_II, phi[interior] - A_IB @ g)


def dense_dtn(A, interior, boundary, phi, g):
    """Affine Dirichlet-to-Neumann map evaluated densely."""
    A_IB = A[np.ix_(interior, boundary)]
    A_BB = A[np.ix_(boundary, boundary)]
    if len(interior):
        a = dense_dirichlet_solve(A, interior, boundary, phi, g)
        return phi[boundary] - A_IB.T @ a - A_BB @ g
    return phi[boundary] - A_BB @ g


def dense_schur_complement(A, interior, boundary):
    """Linear part of the Dirichlet-to-Neumann map (phi = 0)."""
    A_II = A[np.ix_(interior, interior)]
    A_IB = A[np.ix_(interior, boundary)]
    A_BB = A[np.ix_(boundary, boundary)]
    if len(interior):
        return A_IB.T @ np.linalg.solve(A_II, A_IB) - A_BB
    return -A_BB


def dense_ntd(A, boundary, phi, h):
    """Boundary values of the Neumann solve (lstsq on the singular system)."""
    rhs = phi.copy()
    rhs[boundary] = rhs[boundary] - h
    x, *_ = np.linalg.lstsq(A, rhs - rhs.mean(), rcond=None)
    g = x[boundary]
    return g - g.mean()


def dense_neumann_solve(A, boundary, phi, h):
    """Full vertex solution of the Neumann problem, zero mean."""
    rhs = phi.copy()
    rhs[boundary] = rhs[boundary] - h
    x, *_ = np.linalg.lstsq(A, rhs - rhs.mean(), rcond=None)
    return x - x.mean()


def dense_harmonic_extend(A, interior, boundary, g):
    n = A.shape[0]
    a = np.zeros(n)
    a[boundary] = g
    if len(interior):
        a[interior] = dense_dirichlet_solve(A, interior, boundary, np.zeros(n), g)
    return a


def signed_area_matrix(n, boundary_loop):
    """U with a^T U b = (1/2) sum over boundary edges of (a_j b_i - a_i b_j)."""
    U = np.zeros((n, n))
    nb = len(boundary_loop)
    for t in range(nb):
        i = int(boundary_loop[t])
        j = int(boundary_loop[(t + 1) % nb])
        U[j, i] += 0.5
        U[i, j] -= 0.5
    return U


def conformal_energy(A, U, a, b):
    return a @ A @ a + b @ A @ b + 2.0 * (a @ U @ b)


def brute_force_best_fit(k_target, lengths_target, dual_lengths):
    """Constrained length fit via SLSQP (independent of the 2x2 projection)."""
    phases = np.concatenate([[0.0], np.cumsum(k_target[1:])])
    T = np.stack([np.cos(phases), np.sin(phases)], axis=1)
    w = 1.0 / dual_lengths

    def objective(x):
        return 0.5 * np.sum(w * (x - lengths_target) ** 2)

    cons = [{"type": "eq", "fun": lambda x: T.T @ x}]
    res = minimize(objective, lengths_target, constraints=cons, method="SLSQP",
                   options={"maxiter": 500, "ftol": 1e-16})
    return res.x
