#!/usr/bin/env python3
"""Amortization benchmark: one factorization, then edits by backsolve only."""

import argparse
import time

import numpy as np

from conformap import (
    BoundaryConditions,
    DiskMesh,
    Flattener,
    SCALE_FACTORS,
    build_laplace,
    counters,
    factor,
)
from conformap import generators as gen


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--grid", type=int, default=316,
                        help="grid resolution; vertices = (n+1)^2")
    parser.add_argument("--edits", type=int, default=50)
    args = parser.parse_args()

    pos, faces = gen.grid_mesh(args.grid, args.grid)
    mesh = DiskMesh.from_positions(pos, faces)
    print(f"mesh: {mesh.n_vertices} vertices, {len(mesh.faces)} faces")

    matrix = build_laplace(mesh)
    t0 = time.monotonic()
    factored = factor(matrix)
    t_factor = time.monotonic() - t0
    print(f"factorization: {t_factor:.3f} s")

    flattener = Flattener(mesh, factored=factored)
    rng = np.random.default_rng(0)
    before = counters.factorizations
    times = []
    for _ in range(args.edits):
        u = rng.uniform(-0.1, 0.1, mesh.n_boundary)
        t0 = time.monotonic()
        flattener.flatten(BoundaryConditions(SCALE_FACTORS, u=u))
        times.append(time.monotonic() - t0)
    mean_edit = float(np.mean(times))
    print(f"{args.edits} edits: mean {mean_edit:.3f} s "
          f"(factor/edit ratio {t_factor / mean_edit:.1f}x)")
    print(f"factorizations during edits: {counters.factorizations - before}")


if __name__ == "__main__":
    main()
