#!/usr/bin/env python3
"""Write demo OBJ meshes and JSON inputs for driving the CLI and editor."""

import argparse
import json
import os

import numpy as np

from conformap import generators as gen
from conformap.objio import write_obj


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo")
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)

    for name, (pos, faces) in {
        "hemisphere": gen.hemisphere(16),
        "cap": gen.spherical_cap(16, np.pi / 3),
        "bumpy_disk": gen.random_disk_mesh(np.random.default_rng(2), 2000),
        "sphere": gen.icosphere(3),
        "torus": gen.torus_mesh(24, 12),
    }.items():
        path = os.path.join(args.out, f"{name}.obj")
        write_obj(path, pos, faces)
        print("wrote", path)

    cones = [{"vertexIndex": v, "coneAngle": np.pi} for v in (0, 20, 50, 100)]
    with open(os.path.join(args.out, "cones.json"), "w", encoding="utf-8") as fh:
        json.dump(cones, fh, indent=2)

    square = {"points": [[0, 0], [1, 0], [1, 1], [0, 1]], "closed": True}
    with open(os.path.join(args.out, "square.json"), "w", encoding="utf-8") as fh:
        json.dump(square, fh, indent=2)
    print("wrote cones.json and square.json")


if __name__ == "__main__":
    main()
