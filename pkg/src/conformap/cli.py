"""Command-line front end.

Examples:
    conformap --input mesh.obj --mode auto --out-obj flat.obj --report report.json
    conformap --input mesh.obj --mode disk --out-svg disk.svg
    conformap --input sphere.obj --mode cones --cones cones.json --out-obj cut.obj
    conformap --input mesh.obj --serve 8732

Errors are reported as one JSON object on stderr and a nonzero exit status.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import apps, quality
from .errors import ConformapError
from .flatten import HARMONIC, HOLOMORPHIC, BoundaryConditions, EXTERIOR_ANGLES, SCALE_FACTORS, Flattener
from .mesh import DiskMesh, SurfaceMesh
from .objio import normalize_uv, read_obj, write_obj
from .svgout import write_svg

MODES = ("auto", "angles", "lengths", "sharp", "cones", "disk", "curve")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conformap",
        description="Conformal flattening of disk-topology triangle meshes",
    )
    parser.add_argument("--input", help="input OBJ mesh")
    parser.add_argument("--mode", choices=MODES, default="auto")
    parser.add_argument("--boundary-data", help="JSON boundary data (angles/lengths/sharp)")
    parser.add_argument("--cones", help="JSON cone file: [{vertexIndex, coneAngle}, ...]")
    parser.add_argument("--target-curve", help="JSON target curve: {points, closed}")
    parser.add_argument("--extension", choices=(HOLOMORPHIC, HARMONIC),
                        help="interior extension (default depends on mode)")
    parser.add_argument("--out-obj", help="write flattened OBJ with vt records")
    parser.add_argument("--out-svg", help="write an SVG of the layout")
    parser.add_argument("--report", help="write a JSON quality report")
    parser.add_argument("--serve", type=int, metavar="PORT",
                        help="start the local editing service")
    parser.add_argument("--host", default="127.0.0.1", help="bind address for --serve")
    return parser


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _flatten_for_mode(args, mesh: DiskMesh):
    extension = args.extension
    flattener = Flattener(mesh)
    if args.mode == "auto":
        flat = apps.flatten_auto(flattener, extension or HOLOMORPHIC)
    elif args.mode == "angles":
        data = _load_json(args.boundary_data)
        k_target = np.asarray(data["values"], dtype=np.float64)
        bc = BoundaryConditions(EXTERIOR_ANGLES, k_target=k_target,
                                extension=extension or HOLOMORPHIC)
        flat = flattener.flatten(bc)
    elif args.mode == "lengths":
        data = _load_json(args.boundary_data)
        lengths = np.asarray(data["values"], dtype=np.float64)
        u = apps.scale_factors_from_lengths(mesh, lengths)
        bc = BoundaryConditions(SCALE_FACTORS, u=u, extension=extension or HOLOMORPHIC)
        flat = flattener.flatten(bc)
    elif args.mode == "sharp":
        data = _load_json(args.boundary_data)
        corners = {int(c["vertex"]): float(c["exteriorAngle"]) for c in data["corners"]}
        flat = apps.flatten_sharp(flattener, corners, extension or HARMONIC)
    elif args.mode == "disk":
        flat = apps.uniformize_disk(flattener)
    elif args.mode == "curve":
        data = _load_json(args.target_curve)
        if not data.get("closed", True):
            raise ConformapError("target curve must be closed")
        flat = apps.flatten_to_curve(flattener, apps.TargetCurve(np.asarray(data["points"])))
    else:  # pragma: no cover
        raise ConformapError(f"unhandled mode {args.mode}")
    return flattener, flat


def run(args) -> dict:
    if args.mode == "cones":
        positions, faces = read_obj(args.input)
        surface = SurfaceMesh.from_positions(positions, faces)
        cone_data = _load_json(args.cones)
        cones = {int(c["vertexIndex"]): float(c["coneAngle"]) for c in cone_data}
        result = apps.flatten_cones(surface, cones)
        mesh, flat = result.disk, result.flattening
        out_positions = positions[result.seams.vertex_origin]
        extra = {"coneAngleSums": result.cone_angle_sums(cones)}
    else:
        positions, faces = read_obj(args.input)
        mesh = DiskMesh.from_positions(positions, faces)
        flattener, flat = _flatten_for_mode(args, mesh)
        out_positions = positions
        curve = flattener.last_curve
        ratios = curve.lengths_fit / curve.lengths_target
        extra = {"lengthFitRatio": {
            "min": float(ratios.min()), "max": float(ratios.max()),
            "median": float(np.median(ratios)),
        }}

    report = quality.quasi_conformal_error(mesh, flat.coords)
    uv = normalize_uv(flat.coords)

    if args.out_obj:
        write_obj(args.out_obj, out_positions, mesh.faces, uv)
    if args.out_svg:
        write_svg(args.out_svg, mesh, flat.coords)

    payload = {
        "mode": args.mode,
        "vertices": mesh.n_vertices,
        "faces": len(mesh.faces),
        "boundaryVertices": mesh.n_boundary,
        "iterations": flat.iterations,
        "boundaryLoop": mesh.boundary_loop.tolist(),
        "quality": report.to_dict(),
        "rawCoordinates": flat.coords.tolist(),
        **extra,
    }
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(payload, fh)
    return payload


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.serve is not None:
            from .server import serve_edit_session
            serve_edit_session(args.serve, host=args.host, obj_path=args.input)
            return 0
        if not args.input:
            raise ConformapError("--input is required")
        payload = run(args)
        summary = {k: payload[k] for k in
                   ("mode", "vertices", "faces", "boundaryVertices", "iterations")}
        summary["qAvg"] = payload["quality"]["qAvg"]
        print(json.dumps(summary))
        return 0
    except ConformapError as exc:
        json.dump({"error": {"type": type(exc).__name__, "message": str(exc)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 1
    except (OSError, ValueError, KeyError) as exc:
        json.dump({"error": {"type": type(exc).__name__, "message": str(exc)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
