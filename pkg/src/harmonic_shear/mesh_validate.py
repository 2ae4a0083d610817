"""
Validation meshes and log10 error fields.

Two polar meshes of the closed disk are used: a uniform one
(r = k/20, theta = 2 pi k/40) and one packed against the boundary
(r = 0.990, 0.991, ..., 1.000 with the same angles). On each point the
quadrature shear is compared against the closed form:

    total  = |f - Q(f)|
    h-part = 2 |Re(h - Q(h))|
    phi-part = |phi - Q(phi)|

with total <= h-part + phi-part. Points where either side could not be
evaluated (pole, non-convergence, non-finite value) carry the sentinel
NaN and are skipped by the summaries.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .conformal import NgonMap, ngon_map_exact
from .errors import InvalidArgumentError, NoOracleError
from .shear import DEFAULT_TOL, Dilatation, analytic_shear, shear_f

__all__ = [
    "DiskMesh",
    "ErrorField",
    "Validation",
    "mesh_interior",
    "mesh_boundary",
    "mesh_custom",
    "validate",
    "error_field_f",
    "error_field_parts",
    "hot_spots",
    "hot_spot_roots",
    "top_decile_near_roots",
    "angular_distance_to_roots",
    "LOG10_FLOOR",
    "COMPONENTS",
]

LOG10_FLOOR = -16.0
SENTINEL = float("nan")
COMPONENTS = ("total_f", "analytic_part_h", "conformal_phi")


@dataclass(frozen=True)
class DiskMesh:
    radii: np.ndarray
    angles: np.ndarray
    name: str = "custom"

    @property
    def shape(self) -> tuple:
        return (len(self.radii), len(self.angles))

    @property
    def points(self) -> np.ndarray:
        """Ring-major grid: ``points[i, j] = radii[i] * exp(1j * angles[j])``."""
        return self.radii[:, None] * np.exp(1j * self.angles[None, :])

    @property
    def layout(self) -> str:
        # the boundary strip is too thin to read in polar form
        return "cartesian" if self.name == "boundary" else "polar"

    def __len__(self) -> int:
        return self.radii.size * self.angles.size


def _angles(count: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(count) / (count - 1)


def mesh_interior() -> DiskMesh:
    """r = k/20 (k = 0..20) by theta = 2 pi k / 40 (k = 0..40): 861 points."""
    return DiskMesh(np.arange(21) / 20.0, _angles(41), "interior")


def mesh_boundary() -> DiskMesh:
    """r = (990 + k)/1000 (k = 0..10) by the same 41 angles: 451 points."""
    return DiskMesh((990.0 + np.arange(11)) / 1000.0, _angles(41), "boundary")


def mesh_custom(nr: int, ntheta: int, rmax: float) -> DiskMesh:
    if nr < 1 or ntheta < 2:
        raise InvalidArgumentError("need nr >= 1 and ntheta >= 2")
    if not 0 < rmax <= 1:
        raise InvalidArgumentError(f"rmax must lie in (0, 1], got {rmax}")
    radii = np.array([0.0]) if nr == 1 else rmax * np.arange(nr) / (nr - 1)
    return DiskMesh(radii, _angles(ntheta), "custom")


@dataclass
class ErrorField:
    mesh: DiskMesh
    log10_error: np.ndarray
    component: str

    @property
    def sentinel(self) -> np.ndarray:
        return np.isnan(self.log10_error)

    @property
    def finite_values(self) -> np.ndarray:
        return self.log10_error[~self.sentinel]

    def summary(self) -> dict:
        vals = self.finite_values
        return {
            "median_log10_err": float(np.median(vals)) if vals.size else None,
            "max_log10_err": float(np.max(vals)) if vals.size else None,
            "sentinels": int(self.sentinel.sum()),
        }

    def rows(self):
        """(r, theta, re_z, im_z, value) per point, ring-major."""
        pts = self.mesh.points
        for i, r in enumerate(self.mesh.radii):
            for j, th in enumerate(self.mesh.angles):
                z = pts[i, j]
                yield float(r), float(th), float(z.real), float(z.imag), float(self.log10_error[i, j])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["r", "theta", "re_z", "im_z", "value_or_sentinel"])
        for r, th, x, y, v in self.rows():
            writer.writerow([repr(r), repr(th), repr(x), repr(y), "sentinel" if math.isnan(v) else repr(v)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        grid = [[None if math.isnan(v) else float(v) for v in row] for row in self.log10_error]
        return {
            "component": self.component,
            "mesh": self.mesh.name,
            "layout": self.mesh.layout,
            "radii": self.mesh.radii.tolist(),
            "angles": self.mesh.angles.tolist(),
            "grid": grid,
            **self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _log10(err: np.ndarray, bad: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.log10(np.maximum(err, 10.0 ** LOG10_FLOOR))
    out[bad | ~np.isfinite(err)] = SENTINEL
    return out


@dataclass
class Validation:
    """All three error fields from one evaluation pass, plus raw values."""

    n: int
    dilatation: Dilatation
    tol: float
    total: ErrorField
    h_part: ErrorField
    phi_part: ErrorField
    raw: dict = field(repr=False, default_factory=dict)

    @property
    def fields(self) -> dict:
        return {"total_f": self.total, "analytic_part_h": self.h_part, "conformal_phi": self.phi_part}


def validate(n: int, w: Dilatation, mesh: DiskMesh, tol: float = DEFAULT_TOL) -> Validation:
    """Evaluate quadrature and closed forms on ``mesh`` and build the error fields."""
    if not (w.vanishes or (w.kind == "power" and w.power in (n, 2 * n))):
        raise NoOracleError(f"no closed form for omega = {w.describe()} with n = {n}")
    z = mesh.points
    m = NgonMap(n, tol)
    q = shear_f(m, w, z, tol)

    h_ex, g_ex = analytic_shear(n, w, z, closed=True, pole="nan")
    phi_ex = ngon_map_exact(n, z, pole="nan")
    # f = h + conj(g) = 2 Re h - conj(phi); writing the exact value the same way
    # as the quadrature keeps the part-wise split a true triangle inequality,
    # free of the few-ulp disagreement between the g and phi closed forms
    f_ex = 2.0 * h_ex.real - np.conj(phi_ex)

    h_bad = ~(q.h_converged & np.isfinite(q.h) & np.isfinite(h_ex))
    phi_bad = ~(q.phi_converged & np.isfinite(q.phi) & np.isfinite(phi_ex))
    total_bad = h_bad | phi_bad | ~np.isfinite(f_ex)

    with np.errstate(invalid="ignore"):
        total = np.abs(f_ex - q.f)
        h_part = 2.0 * np.abs((h_ex - q.h).real)
        phi_part = np.abs(phi_ex - q.phi)

    return Validation(
        n,
        w,
        tol,
        ErrorField(mesh, _log10(total, total_bad), "total_f"),
        ErrorField(mesh, _log10(h_part, h_bad), "analytic_part_h"),
        ErrorField(mesh, _log10(phi_part, phi_bad), "conformal_phi"),
        raw={
            "quadrature": q,
            "h_exact": h_ex,
            "g_exact": g_ex,
            "phi_exact": phi_ex,
            "oracle_gap": np.abs(h_ex - g_ex - phi_ex),
            "abs_total": total,
            "abs_h_part": h_part,
            "abs_phi_part": phi_part,
        },
    )


def error_field_f(n: int, w: Dilatation, mesh: DiskMesh, tol: float = DEFAULT_TOL) -> ErrorField:
    """log10 |f - Q(f)| on ``mesh``."""
    return validate(n, w, mesh, tol).total


def error_field_parts(n: int, w: Dilatation, mesh: DiskMesh, tol: float = DEFAULT_TOL):
    """(log10 2|Re(h - Q(h))|, log10 |phi - Q(phi)|) on ``mesh``."""
    v = validate(n, w, mesh, tol)
    return v.h_part, v.phi_part


def angular_distance_to_roots(theta, m: int) -> np.ndarray:
    """Angular distance from ``theta`` to the nearest m-th root of unity."""
    step = 2.0 * np.pi / m
    d = np.mod(np.asarray(theta, dtype=float), step)
    return np.minimum(d, step - d)


def nearest_root_index(theta, m: int) -> np.ndarray:
    step = 2.0 * np.pi / m
    return np.mod(np.rint(np.asarray(theta, dtype=float) / step).astype(int), m)


HOT_SPOT_DECADES = 2.0


def hot_spots(fieldv: ErrorField, decades: float = HOT_SPOT_DECADES) -> np.ndarray:
    """
    Mask of points that lost accuracy: sentinels (the "white areas") and
    finite errors at least ``decades`` orders of magnitude above the
    field's median.
    """
    vals = fieldv.log10_error
    ok = ~np.isnan(vals)
    if not ok.any():
        return ~ok
    cut = np.median(vals[ok]) + decades
    with np.errstate(invalid="ignore"):
        return ~ok | (vals >= cut)


def hot_spot_roots(fieldv: ErrorField, m: int, decades: float = HOT_SPOT_DECADES) -> set:
    """
    Indices k of the m-th roots of unity exp(2 pi i k / m) whose sector
    (angular distance <= pi/(2m)) holds at least one hot spot.
    """
    theta = np.broadcast_to(fieldv.mesh.angles[None, :], fieldv.mesh.shape)
    hot = hot_spots(fieldv, decades)
    near = angular_distance_to_roots(theta, m) <= np.pi / (2 * m) + 1e-12
    return set(nearest_root_index(theta[hot & near], m).tolist())


def top_decile_near_roots(fieldv: ErrorField, m: int, quantile: float = 0.9) -> float:
    """Fraction of the top-decile finite errors within pi/(2m) of an m-th root."""
    theta = np.broadcast_to(fieldv.mesh.angles[None, :], fieldv.mesh.shape)
    vals = fieldv.log10_error
    ok = ~np.isnan(vals)
    hot = ok & (vals >= np.quantile(vals[ok], quantile))
    d = angular_distance_to_roots(theta[hot], m)
    return float(np.mean(d <= np.pi / (2 * m) + 1e-12))
