#!/usr/bin/env python3
"""Run every application recipe on demo meshes and write SVG layouts."""

import argparse
import os

import numpy as np

from conformap import BoundaryConditions, Flattener, HARMONIC, SCALE_FACTORS
from conformap import generators as gen
from conformap.apps import (
    TargetCurve,
    flatten_auto,
    flatten_cones,
    flatten_sharp,
    flatten_to_curve,
    uniformize_disk,
)
from conformap.quality import quasi_conformal_error
from conformap.svgout import write_svg


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="gallery")
    parser.add_argument("--resolution", type=int, default=16)
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)
    rng = np.random.default_rng(1)

    mesh = gen.disk_mesh_from(gen.hemisphere(args.resolution, jitter=0.2, rng=rng))
    fl = Flattener(mesh)

    def save(name, flat, disk=None):
        disk = disk if disk is not None else mesh
        report = quasi_conformal_error(disk, flat.coords)
        path = os.path.join(args.out, f"{name}.svg")
        write_svg(path, disk, flat.coords)
        print(f"{name:12s} q_avg {report.q_avg:.4f}  iterations {flat.iterations}  -> {path}")

    save("auto", flatten_auto(fl))
    save("harmonic", fl.flatten(BoundaryConditions(
        SCALE_FACTORS, u=0.3 * np.sin(np.linspace(0, 4 * np.pi, mesh.n_boundary)),
        extension=HARMONIC)))

    loop = mesh.boundary_loop
    nb = len(loop)
    corners = {int(loop[t]): np.pi / 2 for t in (0, nb // 4, nb // 2, 3 * nb // 4)}
    save("sharp", flatten_sharp(fl, corners))

    save("disk", uniformize_disk(fl))

    blob = TargetCurve(np.array(
        [[(1 + 0.25 * np.cos(3 * t)) * np.cos(t),
          (1 + 0.25 * np.cos(3 * t)) * np.sin(t)]
         for t in np.linspace(0, 2 * np.pi, 96, endpoint=False)]))
    save("curve", flatten_to_curve(fl, blob, max_iterations=40, tol=1e-3))

    sphere = gen.surface_mesh_from(gen.icosphere(2))
    cones = {0: np.pi, 20: np.pi, 50: np.pi, 100: np.pi}
    result = flatten_cones(sphere, cones)
    save("cones", result.flattening, disk=result.disk)


if __name__ == "__main__":
    main()
