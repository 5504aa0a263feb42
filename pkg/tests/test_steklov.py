import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conformap import (
    DiskMesh,
    Flattener,
    build_laplace,
    conjugate_extend,
    dirichlet_to_neumann,
    factor,
    harmonic_extend,
    hilbert_transform,
    neumann_to_dirichlet,
)
from conformap import generators as gen
from conftest import random_disk, small_mesh_zoo
from oracles import (
    conformal_energy,
    dense_cotan,
    dense_dtn,
    dense_harmonic_extend,
    dense_ntd,
    dense_schur_complement,
    signed_area_matrix,
)


def make_factor(mesh):
    return factor(build_laplace(mesh))


class TestDirichletToNeumann:
    def test_constant_data_zero_flux(self, square_fan):
        fac = make_factor(square_fan)
        phi = np.zeros(square_fan.n_vertices)
        g = np.full(square_fan.n_boundary, 3.7)
        h = dirichlet_to_neumann(fac, phi, g)
        assert np.abs(h).max() < 1e-12

    def test_matches_dense_schur(self):
        rng = np.random.default_rng(4)
        mesh = random_disk(3, target=12, bump=0.3)
        fac = make_factor(mesh)
        A = dense_cotan(mesh)
        g = rng.standard_normal(mesh.n_boundary)
        phi = np.zeros(mesh.n_vertices)
        h = dirichlet_to_neumann(fac, phi, g)
        lam = dense_schur_complement(A, fac.matrix.interior, fac.matrix.boundary)
        assert np.abs(h - lam @ g).max() < 1e-10

    def test_roundtrip_with_ntd(self, hemisphere_mesh):
        rng = np.random.default_rng(5)
        fac = make_factor(hemisphere_mesh)
        phi = np.zeros(hemisphere_mesh.n_vertices)
        g = rng.standard_normal(hemisphere_mesh.n_boundary)
        h = dirichlet_to_neumann(fac, phi, g)
        back = neumann_to_dirichlet(fac, phi, h)
        dev = (back - back.mean()) - (g - g.mean())
        assert np.abs(dev).max() < 1e-7

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 1000))
    def test_symmetry_of_linear_part(self, seed):
        rng = np.random.default_rng(seed)
        mesh = random_disk(seed % 7, target=80)
        fac = make_factor(mesh)
        phi = np.zeros(mesh.n_vertices)
        g1 = rng.standard_normal(mesh.n_boundary)
        g2 = rng.standard_normal(mesh.n_boundary)
        h1 = dirichlet_to_neumann(fac, phi, g1)
        h2 = dirichlet_to_neumann(fac, phi, g2)
        scale = max(np.abs(h1).max(), np.abs(h2).max(), 1.0)
        assert abs(g1 @ h2 - g2 @ h1) < 1e-9 * scale * len(g1)


class TestNeumannToDirichlet:
    def test_zero_data(self, square_fan):
        fac = make_factor(square_fan)
        g = neumann_to_dirichlet(fac, np.zeros(square_fan.n_vertices),
                                 np.zeros(square_fan.n_boundary))
        assert np.abs(g).max() < 1e-12

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(6)
        for name, mesh in small_mesh_zoo():
            fac = make_factor(mesh)
            A = dense_cotan(mesh)
            h = rng.standard_normal(mesh.n_boundary)
            h -= h.mean()  # compatible data
            phi = np.zeros(mesh.n_vertices)
            g = neumann_to_dirichlet(fac, phi, h)
            ref = dense_ntd(A, fac.matrix.boundary, phi, h)
            assert np.abs(g - ref).max() < 1e-10, name


class TestHarmonicExtend:
    def test_constant_extends_to_constant(self, hemisphere_mesh):
        fac = make_factor(hemisphere_mesh)
        a = harmonic_extend(fac, np.full(hemisphere_mesh.n_boundary, 2.0))
        assert np.abs(a - 2.0).max() < 1e-10

    def test_linear_functions_harmonic_on_flat_mesh(self, flat_grid):
        fac = make_factor(flat_grid)
        pos, _ = gen.grid_mesh(5, 5)
        target = 0.3 * pos[:, 0] - 1.2 * pos[:, 1] + 0.5
        a = harmonic_extend(fac, target[flat_grid.boundary_loop])
        assert np.abs(a - target).max() < 1e-10

    def test_interpolates_boundary_exactly(self, hemisphere_mesh):
        rng = np.random.default_rng(7)
        fac = make_factor(hemisphere_mesh)
        g = rng.standard_normal(hemisphere_mesh.n_boundary)
        a = harmonic_extend(fac, g)
        assert np.array_equal(a[hemisphere_mesh.boundary_loop], g)

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 500))
    def test_maximum_principle_on_random_disks(self, seed):
        rng = np.random.default_rng(seed)
        mesh = random_disk(seed % 5, target=100, bump=0.0)  # flat Delaunay
        fac = make_factor(mesh)
        g = rng.standard_normal(mesh.n_boundary)
        a = harmonic_extend(fac, g)
        assert a.max() <= g.max() + 1e-9
        assert a.min() >= g.min() - 1e-9

    def test_matches_dense_oracle(self):
        rng = np.random.default_rng(8)
        for name, mesh in small_mesh_zoo():
            fac = make_factor(mesh)
            A = dense_cotan(mesh)
            g = rng.standard_normal(mesh.n_boundary)
            a = harmonic_extend(fac, g)
            ref = dense_harmonic_extend(A, fac.matrix.interior, fac.matrix.boundary, g)
            assert np.abs(a - ref).max() < 1e-10, name


class TestHilbertTransform:
    def test_constant_gives_zero(self):
        assert np.abs(hilbert_transform(np.full(9, 4.2))).max() == 0.0

    def test_square_example(self):
        # a = Re(position) on the unit square boundary
        h = hilbert_transform(np.array([0.0, 1.0, 1.0, 0.0]))
        assert h == pytest.approx(np.array([0.5, 0.5, -0.5, -0.5]))

    @given(st.lists(st.floats(-100, 100), min_size=3, max_size=40))
    def test_telescoping_zero_sum(self, values):
        h = hilbert_transform(np.asarray(values))
        assert abs(h.sum()) < 1e-9 * max(1.0, np.abs(values).max())


class TestConjugateExtend:
    def test_flat_square_recovers_imaginary_part(self, flat_grid):
        fac = make_factor(flat_grid)
        pos, _ = gen.grid_mesh(5, 5)
        a = harmonic_extend(fac, pos[flat_grid.boundary_loop, 0])
        b = conjugate_extend(fac, a)
        target = pos[:, 1] - pos[:, 1].mean()
        assert np.abs(b - target).max() < 1e-8

    def test_constant_a_gives_zero(self, hemisphere_mesh):
        fac = make_factor(hemisphere_mesh)
        b = conjugate_extend(fac, np.full(hemisphere_mesh.n_vertices, 1.5))
        assert np.abs(b).max() < 1e-12

    def test_minimizes_conformal_energy(self):
        mesh = random_disk(9, target=60)
        fac = make_factor(mesh)
        rng = np.random.default_rng(10)
        A = dense_cotan(mesh)
        U = signed_area_matrix(mesh.n_vertices, mesh.boundary_loop)
        g = rng.standard_normal(mesh.n_boundary)
        a = harmonic_extend(fac, g)
        b = conjugate_extend(fac, a)
        e0 = conformal_energy(A, U, a, b)
        for _ in range(100):
            perturbation = 1e-3 * rng.standard_normal(mesh.n_vertices)
            assert conformal_energy(A, U, a, b + perturbation) >= e0 - 1e-12


class TestDenseOracleEquivalence:
    """Every operator against the dense reference on every small mesh."""

    def test_all_ops_all_meshes(self):
        rng = np.random.default_rng(11)
        for name, mesh in small_mesh_zoo():
            fac = make_factor(mesh)
            A = dense_cotan(mesh)
            interior, boundary = fac.matrix.interior, fac.matrix.boundary
            g = rng.standard_normal(mesh.n_boundary)
            phi = rng.standard_normal(mesh.n_vertices)

            h = dirichlet_to_neumann(fac, phi, g)
            ref_h = dense_dtn(A, interior, boundary, phi, g)
            assert np.abs(h - ref_h).max() < 1e-9, name

            hn = rng.standard_normal(mesh.n_boundary)
            rhs = phi.copy()
            rhs[boundary] -= hn
            gd = neumann_to_dirichlet(fac, phi, hn)
            ref_g = dense_ntd(A, boundary, phi, hn)
            assert np.abs(gd - ref_g).max() < 1e-9, name

            a = harmonic_extend(fac, g)
            ref_a = dense_harmonic_extend(A, interior, boundary, g)
            assert np.abs(a - ref_a).max() < 1e-9, name

            b = conjugate_extend(fac, a)
            hb = hilbert_transform(a[boundary])
            rhs_b = np.zeros(mesh.n_vertices)
            rhs_b[boundary] = -hb
            ref_b, *_ = np.linalg.lstsq(A, rhs_b, rcond=None)
            ref_b -= ref_b.mean()
            assert np.abs(b - ref_b).max() < 1e-9, name
