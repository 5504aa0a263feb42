import numpy as np
import pytest

from conformap import DiskMesh
from conformap import generators as gen


@pytest.fixture
def equilateral():
    h = np.sqrt(3.0) / 2.0
    return DiskMesh.from_positions(np.array([[0.0, 0.0], [1.0, 0.0], [0.5, h]]),
                                   [[0, 1, 2]])


@pytest.fixture
def unit_square():
    """Two triangles along the (0,0)-(1,1) diagonal."""
    return DiskMesh.from_positions(
        np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]),
        [[0, 1, 2], [0, 2, 3]],
    )


@pytest.fixture
def hex_fan():
    """Planar hexagon fan: one interior vertex."""
    return gen.disk_mesh_from(gen.polar_disk(1))


@pytest.fixture
def square_fan():
    """Unit square with a center vertex (four faces)."""
    return gen.disk_mesh_from(gen.crisscross_grid(1, 1))


@pytest.fixture
def flat_grid():
    return gen.disk_mesh_from(gen.grid_mesh(5, 5))


@pytest.fixture
def hemisphere_mesh():
    return gen.disk_mesh_from(gen.hemisphere(8))


def random_disk(seed, target=200, bump=0.25):
    rng = np.random.default_rng(seed)
    return gen.disk_mesh_from(gen.random_disk_mesh(rng, target, bump))


def small_mesh_zoo():
    """Assorted meshes <= 50 vertices for dense-oracle equivalence."""
    h = np.sqrt(3.0) / 2.0
    zoo = [
        ("triangle", DiskMesh.from_positions(
            np.array([[0.0, 0.0], [1.0, 0.0], [0.5, h]]), [[0, 1, 2]])),
        ("square", DiskMesh.from_positions(
            np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]),
            [[0, 1, 2], [0, 2, 3]])),
        ("hex_fan", gen.disk_mesh_from(gen.polar_disk(1))),
        ("square_fan", gen.disk_mesh_from(gen.crisscross_grid(1, 1))),
        ("strip", gen.disk_mesh_from(gen.grid_mesh(4, 1))),
        ("grid3", gen.disk_mesh_from(gen.grid_mesh(3, 3))),
        ("disk2", gen.disk_mesh_from(gen.polar_disk(2))),
        ("cap2", gen.disk_mesh_from(gen.spherical_cap(2, np.pi / 3))),
        ("bumpy", random_disk(11, target=28, bump=0.35)),
    ]
    assert all(m.n_vertices <= 50 for _, m in zoo)
    return zoo


@pytest.fixture(params=[name for name, _ in small_mesh_zoo()])
def small_mesh(request):
    return dict(small_mesh_zoo())[request.param]
