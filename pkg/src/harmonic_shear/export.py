"""
Plain-text writers: CSV tables, SVG image meshes and error maps, OBJ
triangulations of structured polar grids.

Everything here formats numbers with ``repr`` so that the same input
arrays always give byte-identical output.
"""
from __future__ import annotations

import csv
import io
import math

import numpy as np

__all__ = [
    "SVG_SAMPLES",
    "polar_curves",
    "table_csv",
    "mesh_svg",
    "error_svg",
    "grid_obj",
]

SVG_SAMPLES = 200
_SIZE = 600.0
# light to dark, one bin per two decades of log10 error
_PALETTE = ("#f7fbff", "#deebf7", "#c6dbef", "#9ecae1", "#6baed6", "#4292c6", "#2171b5", "#08519c", "#08306b")


def _num(x) -> str:
    x = float(x)
    return "nan" if math.isnan(x) else repr(x)


def table_csv(header, columns) -> str:
    """CSV text with one row per entry of the equally long ``columns``."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in zip(*columns):
        writer.writerow([v if isinstance(v, str) else _num(v) for v in row])
    return buf.getvalue()


def polar_curves(radii, angles, rmax: float, samples: int = SVG_SAMPLES):
    """
    Rings and rays of a polar grid as sampled curves in the disk.

    Rings sit at ``radii`` rescaled so the largest is ``rmax``; rays run
    from 0 to ``rmax`` at each of ``angles``. Returns two complex arrays of
    shape (len(radii), samples) and (len(angles), samples).
    """
    radii = np.asarray(radii, dtype=float)
    angles = np.asarray(angles, dtype=float)
    top = radii.max()
    scale = rmax / top if top > 0 else 0.0
    t = np.linspace(0.0, 2.0 * np.pi, samples)
    rings = (radii * scale)[:, None] * np.exp(1j * t)[None, :]
    s = np.linspace(0.0, rmax, samples)
    rays = s[None, :] * np.exp(1j * angles)[:, None]
    return rings, rays


def _viewport(points: np.ndarray, margin: float = 0.05):
    pts = points[np.isfinite(points)]
    if pts.size == 0:
        return -1.0, 1.0, 1.0
    x0, x1 = pts.real.min(), pts.real.max()
    y0, y1 = pts.imag.min(), pts.imag.max()
    span = max(x1 - x0, y1 - y0, 1e-12) * (1.0 + 2.0 * margin)
    cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    return cx - span / 2, cy + span / 2, span


def _polyline(curve: np.ndarray, left: float, top: float, span: float, cls: str) -> str:
    curve = curve[np.isfinite(curve)]
    k = _SIZE / span
    coords = " ".join(f"{(z.real - left) * k:.3f},{(top - z.imag) * k:.3f}" for z in curve)
    return f'<polyline class="{cls}" points="{coords}"/>'


def mesh_svg(rings: np.ndarray, rays: np.ndarray, title: str = "") -> str:
    """SVG with one polyline per image ring and per image ray; y points up."""
    left, top, span = _viewport(np.concatenate([rings.ravel(), rays.ravel()]))
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE:.0f}" height="{_SIZE:.0f}" '
        f'viewBox="0 0 {_SIZE:.0f} {_SIZE:.0f}">',
        f"<title>{title}</title>",
        '<g fill="none" stroke="#1f3b73" stroke-width="0.6">',
    ]
    lines += [_polyline(c, left, top, span, "ring") for c in rings]
    lines += [_polyline(c, left, top, span, "ray") for c in rays]
    lines += ["</g>", "</svg>"]
    return "\n".join(lines) + "\n"


def _colour(v: float, lo: float = -16.0, hi: float = 0.0) -> str:
    if math.isnan(v):
        return "#ffffff"
    frac = (min(max(v, lo), hi) - lo) / (hi - lo)
    return _PALETTE[min(int(frac * len(_PALETTE)), len(_PALETTE) - 1)]


def error_svg(radii, angles, grid, layout: str, title: str = "") -> str:
    """
    log10 error grid as coloured cells; sentinels stay white.

    ``layout="polar"`` places one dot per point at r e^(i theta);
    ``layout="cartesian"`` draws the (theta, r) rectangle, which is the
    readable view of a thin boundary strip.
    """
    radii = np.asarray(radii, dtype=float)
    angles = np.asarray(angles, dtype=float)
    grid = np.asarray(grid, dtype=float)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE:.0f}" height="{_SIZE:.0f}" '
        f'viewBox="0 0 {_SIZE:.0f} {_SIZE:.0f}">',
        f"<title>{title}</title>",
        '<g stroke="#999999" stroke-width="0.2">',
    ]
    if layout == "cartesian":
        w = _SIZE / len(angles)
        h = _SIZE / len(radii)
        for i in range(len(radii)):
            for j in range(len(angles)):
                y = _SIZE - (i + 1) * h
                out.append(f'<rect x="{j * w:.3f}" y="{y:.3f}" width="{w:.3f}" height="{h:.3f}" '
                           f'fill="{_colour(grid[i, j])}"/>')
    else:
        c = _SIZE / 2
        k = 0.95 * c / max(radii.max(), 1e-12)
        for i, r in enumerate(radii):
            for j, th in enumerate(angles):
                x = c + k * r * math.cos(th)
                y = c - k * r * math.sin(th)
                out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="{_colour(grid[i, j])}"/>')
    out += ["</g>", "</svg>"]
    return "\n".join(out) + "\n"


def grid_obj(xyz: np.ndarray) -> str:
    """
    Wavefront OBJ triangulation of a ring-major polar grid of points.

    ``xyz`` has shape (nr, ntheta, 3). A first ring of radius zero is a
    single point, so it is fanned instead of split into quads.
    """
    nr, nt, _ = xyz.shape
    lines = [f"v {_num(x)} {_num(y)} {_num(z)}" for x, y, z in xyz.reshape(-1, 3)]

    def idx(i, j):
        return i * nt + j + 1

    collapsed = nr > 1 and np.all(xyz[0] == xyz[0, 0])
    for i in range(nr - 1):
        for j in range(nt - 1):
            if i == 0 and collapsed:
                lines.append(f"f {idx(0, 0)} {idx(1, j)} {idx(1, j + 1)}")
                continue
            lines.append(f"f {idx(i, j)} {idx(i + 1, j)} {idx(i + 1, j + 1)}")
            lines.append(f"f {idx(i, j)} {idx(i + 1, j + 1)} {idx(i, j + 1)}")
    return "\n".join(lines) + "\n"
