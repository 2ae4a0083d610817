"""
Command line entry point.

    harmonic-shear shear    --n 4 --omega 8 --mesh interior --format csv
    harmonic-shear validate --n 4 --omega 8 --mesh boundary --allow-sentinels
    harmonic-shear surface  --n 4 --omega 4 --obj surface.obj
    harmonic-shear rule     --gauss 5

Exit codes: 0 success, 1 some points did not converge (or hit a pole)
and --allow-sentinels was not given, 2 usage error, 3 I/O error,
4 no closed form or no minimal surface lift for the requested dilatation.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import export
from .conformal import NgonMap
from .errors import InvalidArgumentError, NoOracleError, NotLiftableError
from .mesh_validate import DiskMesh, mesh_boundary, mesh_custom, mesh_interior, validate
from .minimal_surface import surface_point
from .quadrature import gauss_legendre_rule, kronrod_15_rule
from .shear import DEFAULT_TOL, Dilatation, shear_f

EXIT_OK = 0
EXIT_SENTINELS = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NO_ORACLE = 4

SHEAR_RMAX = 0.99
SURFACE_RMAX = 0.8


@dataclass
class JobSpec:
    command: str
    n: Optional[int] = None
    dilatation_power: Optional[int] = None
    mesh: str = "interior"
    tol: float = DEFAULT_TOL
    output_format: str = "csv"
    output_path: Optional[str] = None
    allow_sentinels: bool = False
    rmax: Optional[float] = None
    obj_path: Optional[str] = None


class UsageError(Exception):
    pass


def parse_mesh(text: str) -> str:
    """Check a --mesh value: interior, boundary or custom:NR,NT,RMAX."""
    if text in ("interior", "boundary"):
        return text
    if text.startswith("custom:"):
        parts = text[len("custom:"):].split(",")
        try:
            nr, nt, rmax = int(parts[0]), int(parts[1]), float(parts[2])
        except (IndexError, ValueError):
            raise argparse.ArgumentTypeError(f"bad custom mesh {text!r}, expected custom:NR,NT,RMAX")
        if len(parts) != 3 or nr < 1 or nt < 2 or not 0 < rmax <= 1:
            raise argparse.ArgumentTypeError(f"bad custom mesh {text!r}: need NR >= 1, NT >= 2, 0 < RMAX <= 1")
        return text
    raise argparse.ArgumentTypeError(f"unknown mesh {text!r}")


def build_mesh(text: str) -> DiskMesh:
    if text == "interior":
        return mesh_interior()
    if text == "boundary":
        return mesh_boundary()
    nr, nt, rmax = text[len("custom:"):].split(",")
    return mesh_custom(int(nr), int(nt), float(rmax))


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _add_job_flags(p: argparse.ArgumentParser, formats, mesh_default: Optional[str]) -> None:
    p.add_argument("--n", type=int, required=True, help="number of polygon sides (>= 3)")
    p.add_argument("--omega", type=int, required=True, help="dilatation power m, omega = z^m; 0 means omega = 0")
    p.add_argument("--mesh", type=parse_mesh, default=mesh_default,
                   help="interior | boundary | custom:NR,NT,RMAX")
    p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL, help="absolute quadrature tolerance")
    p.add_argument("--format", dest="output_format", choices=formats, default=formats[0])
    p.add_argument("--out", dest="output_path", default=None, help="output file (default: standard output)")
    p.add_argument("--allow-sentinels", action="store_true",
                   help="exit 0 even if some points hit a pole or did not converge")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harmonic-shear", description="Harmonic shears of regular polygon maps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("shear", help="evaluate h, g, f and phi on a mesh or draw the image mesh")
    _add_job_flags(p, ("csv", "json", "svg"), "interior")
    p.add_argument("--rmax", type=_positive_float, default=SHEAR_RMAX, help="outermost ring radius in SVG output")

    p = sub.add_parser("validate", help="error fields against the closed forms")
    _add_job_flags(p, ("json", "csv", "svg"), "interior")

    p = sub.add_parser("surface", help="minimal surface lift (u, v, w) on a polar grid")
    _add_job_flags(p, ("csv", "json"), None)
    p.add_argument("--rmax", type=_positive_float, default=SURFACE_RMAX, help="grid radius when --mesh is not given")
    p.add_argument("--obj", dest="obj_path", default=None, help="also write an OBJ triangulation")

    p = sub.add_parser("rule", help="print quadrature nodes and weights as JSON")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--gauss", type=int, metavar="N", help="N-point Gauss-Legendre rule")
    g.add_argument("--kronrod", action="store_true", help="15-point Kronrod extension of the 7-point Gauss rule")
    return parser


def _check_job(job: JobSpec) -> None:
    if job.n < 3:
        raise UsageError(f"--n must be >= 3, got {job.n}")
    if job.dilatation_power < 0:
        raise UsageError(f"--omega must be >= 0, got {job.dilatation_power}")
    if job.rmax is not None and job.rmax > 1:
        raise UsageError(f"--rmax must be <= 1, got {job.rmax}")


def _write(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text)


def _summary(job: JobSpec, start: float, median=None, maximum=None, sentinels=0, **extra) -> dict:
    params = {k: v for k, v in asdict(job).items() if k != "command"}
    out = {
        "command": job.command,
        "params": params,
        "median_log10_err": median,
        "max_log10_err": maximum,
        "sentinels": int(sentinels),
        "wall_ms": round(1000.0 * (time.perf_counter() - start), 3),
    }
    out.update(extra)
    return out


def _exit_for(sentinels: int, job: JobSpec) -> int:
    return EXIT_SENTINELS if sentinels and not job.allow_sentinels else EXIT_OK


def shear_table(mesh: DiskMesh, res) -> tuple:
    r = np.repeat(mesh.radii, len(mesh.angles))
    th = np.tile(mesh.angles, len(mesh.radii))
    z = mesh.points.ravel()
    cols = [r, th, z.real, z.imag]
    header = ["r", "theta", "re_z", "im_z"]
    for name in ("h", "g", "f", "phi"):
        v = np.asarray(getattr(res, name)).ravel()
        cols += [v.real, v.imag]
        header += [f"re_{name}", f"im_{name}"]
    cols.append(["true" if c else "false" for c in np.asarray(res.converged).ravel()])
    header.append("converged")
    return header, cols


def run_shear(job: JobSpec) -> int:
    start = time.perf_counter()
    m = NgonMap(job.n, job.tol)
    w = Dilatation.from_power(job.dilatation_power)
    if job.output_format == "svg":
        mesh = build_mesh(job.mesh)
        rings, rays = export.polar_curves(mesh.radii, mesh.angles, job.rmax)
        # one pass over every curve sample
        pts = np.concatenate([rings.ravel(), rays.ravel()])
        res = shear_f(m, w, pts, job.tol)
        f = np.where(res.converged, res.f, np.nan)
        k = rings.size
        title = f"shear of the regular {job.n}-gon map, omega = {w.describe()}"
        text = export.mesh_svg(f[:k].reshape(rings.shape), f[k:].reshape(rays.shape), title)
    else:
        mesh = build_mesh(job.mesh)
        res = shear_f(m, w, mesh.points, job.tol)
        header, cols = shear_table(mesh, res)
        if job.output_format == "csv":
            text = export.table_csv(header, cols)
        else:
            rows = [dict(zip(header, (v if isinstance(v, str) else float(v) for v in row))) for row in zip(*cols)]
            for row in rows:
                row["converged"] = row["converged"] == "true"
            text = json.dumps({"mesh": mesh.name, "rows": rows}, allow_nan=True) + "\n"
    sentinels = int(np.size(res.converged) - np.count_nonzero(res.converged))
    _write(job.output_path, text)
    if job.output_path is not None:
        print(json.dumps(_summary(job, start, sentinels=sentinels, points=int(np.size(res.converged)))))
    return _exit_for(sentinels, job)


def _field_path(path: str, component: str, suffix: str) -> Path:
    p = Path(path)
    return p.with_name(f"{p.stem}_{component}{suffix}")


def run_validate(job: JobSpec) -> int:
    start = time.perf_counter()
    mesh = build_mesh(job.mesh)
    v = validate(job.n, Dilatation.from_power(job.dilatation_power), mesh, job.tol)
    fields = {}
    for name, fld in v.fields.items():
        if job.output_path is None:
            fields[name] = fld.to_dict()
            continue
        entry = fld.summary()
        if job.output_format in ("csv", "svg"):
            path = _field_path(job.output_path, name, "." + job.output_format)
            if job.output_format == "csv":
                text = fld.to_csv()
            else:
                text = export.error_svg(mesh.radii, mesh.angles, fld.log10_error, mesh.layout,
                                        f"log10 error, {name}")
            path.write_text(text)
            entry["path"] = str(path)
        fields[name] = entry
    if job.output_path is not None and job.output_format == "json":
        _write(job.output_path, json.dumps({name: f.to_dict() for name, f in v.fields.items()}) + "\n")
    s = v.total.summary()
    print(json.dumps(_summary(job, start, s["median_log10_err"], s["max_log10_err"], s["sentinels"], fields=fields)))
    return _exit_for(s["sentinels"], job)


def run_surface(job: JobSpec) -> int:
    start = time.perf_counter()
    if job.dilatation_power % 2 or job.dilatation_power == 0:
        raise NotLiftableError(f"omega = z^{job.dilatation_power} has no analytic square root to lift")
    if job.mesh is None:
        job.mesh = f"custom:21,41,{job.rmax!r}"
    mesh = build_mesh(job.mesh)
    m = NgonMap(job.n, job.tol)
    pt, ok = surface_point(m, Dilatation.from_power(job.dilatation_power), mesh.points, job.tol, full_output=True)
    xyz = pt.as_array()
    r = np.repeat(mesh.radii, len(mesh.angles))
    th = np.tile(mesh.angles, len(mesh.radii))
    z = mesh.points.ravel()
    header = ["r", "theta", "re_z", "im_z", "u", "v", "w", "converged"]
    cols = [r, th, z.real, z.imag, xyz[..., 0].ravel(), xyz[..., 1].ravel(), xyz[..., 2].ravel(),
            ["true" if c else "false" for c in ok.ravel()]]
    if job.output_format == "csv":
        text = export.table_csv(header, cols)
    else:
        text = json.dumps({"mesh": mesh.name, "radii": mesh.radii.tolist(), "angles": mesh.angles.tolist(),
                           "u": xyz[..., 0].tolist(), "v": xyz[..., 1].tolist(), "w": xyz[..., 2].tolist(),
                           "converged": ok.tolist()}) + "\n"
    _write(job.output_path, text)
    if job.obj_path is not None:
        Path(job.obj_path).write_text(export.grid_obj(xyz))
    sentinels = int(ok.size - np.count_nonzero(ok))
    if job.output_path is not None:
        print(json.dumps(_summary(job, start, sentinels=sentinels, points=int(ok.size))))
    return _exit_for(sentinels, job)


def run_rule(args) -> int:
    if args.kronrod:
        rule, name = kronrod_15_rule(), "kronrod15"
    else:
        rule, name = gauss_legendre_rule(args.gauss), f"gauss{args.gauss}"
    out = {
        "rule": name,
        "nodes": [float(x) for x in rule.nodes],
        "weights": [float(x) for x in rule.weights],
        "degree": int(rule.degree),
        "weight_sum": math.fsum(rule.weights),
    }
    print(json.dumps(out, indent=1))
    return EXIT_OK


RUNNERS = {"shear": run_shear, "validate": run_validate, "surface": run_surface}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "rule":
            return run_rule(args)
        job = JobSpec(
            command=args.command,
            n=args.n,
            dilatation_power=args.omega,
            mesh=args.mesh,
            tol=args.tol,
            output_format=args.output_format,
            output_path=args.output_path,
            allow_sentinels=args.allow_sentinels,
            rmax=getattr(args, "rmax", None),
            obj_path=getattr(args, "obj_path", None),
        )
        _check_job(job)
        return RUNNERS[job.command](job)
    except (UsageError, InvalidArgumentError) as exc:
        parser.print_usage(sys.stderr)
        print(f"harmonic-shear: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NoOracleError, NotLiftableError) as exc:
        print(f"harmonic-shear: {exc}", file=sys.stderr)
        return EXIT_NO_ORACLE
    except OSError as exc:
        print(f"harmonic-shear: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
