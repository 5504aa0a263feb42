"""SVG export of planar layouts: wireframe plus a heavier boundary polyline."""

from __future__ import annotations

import numpy as np

from .mesh import DiskMesh

SCALE = 100.0  # 1 world unit = 100 px
MARGIN = 10.0


def format_svg(mesh: DiskMesh, coords: np.ndarray) -> str:
    coords = np.asarray(coords, dtype=np.float64)
    pts = coords * SCALE
    lo = pts.min(axis=0) - MARGIN
    hi = pts.max(axis=0) + MARGIN
    size = hi - lo

    def xy(p):
        # flip y so the layout appears with +y up
        return f"{p[0] - lo[0]:.3f},{hi[1] - p[1]:.3f}"

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size[0]:.0f}" '
        f'height="{size[1]:.0f}" viewBox="0 0 {size[0]:.3f} {size[1]:.3f}">',
        '<g stroke="#888" stroke-width="0.5" fill="none">',
    ]
    for i, j in mesh.edges:
        lines.append(f'<line x1="{xy(pts[i]).split(",")[0]}" y1="{xy(pts[i]).split(",")[1]}" '
                     f'x2="{xy(pts[j]).split(",")[0]}" y2="{xy(pts[j]).split(",")[1]}"/>')
    lines.append("</g>")
    loop = mesh.boundary_loop
    path = " ".join(xy(pts[v]) for v in loop)
    lines.append(f'<polygon points="{path}" stroke="#000" stroke-width="2" fill="none"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_svg(path, mesh: DiskMesh, coords: np.ndarray):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_svg(mesh, coords))
