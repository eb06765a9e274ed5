"""Command-line front end: ``spaceform {list,verify,ode,export}``.

Exit codes are a stable contract for CI:

- 0: every verdict passed (skipped verdicts do not fail),
- 1: at least one verdict failed,
- 2: usage or parameter error (unknown surface, inadmissible constant, bad override),
- 3: numerical failure (chart off the model, degenerate frame, non-finite
  evaluation, ODE integration failure).

Reports are JSON with ``"schema": "1"``; wall-clock data lives only under
``meta``, which ``--no-meta`` drops so repeated runs are byte-identical.
CSV files use '.' decimals and 17 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time

import numpy as np

from . import __version__, catalog, profile_ode
from .calculus import ChartGrid
from .errors import EvaluationError, InputError, SpaceformError
from .residuals import SurfaceAnalysis
from .shape import sample_surface

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
SCHEMA = "1"
JOBS_ENV = "SPACEFORM_JOBS"

# flag -> family parameter name; only flags given on the command line are forwarded
SURFACE_PARAMS = {
    "C0": ("--C0", float),
    "m": ("--m", int),
    "r": ("--r", float),
    "m1": ("--m1", int),
    "m2": ("--m2", int),
    "r1": ("--r1", float),
    "alpha": ("--alpha", float),
    "c1_tilde": ("--c1_tilde", float),
    "tol": ("--ode-tol", float),
    "rho": ("--rho", float),
    "eps": ("--eps", float),
    "seed": ("--seed", int),
}


# ------------------------------------------------------------------ output


def fmt_float(x) -> str:
    """17 significant digits, '.' decimal, independent of the locale."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        # JSON has no NaN/inf; null marks a non-finite value
        return float(obj) if math.isfinite(obj) else None
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False, ensure_ascii=False) + "\n"


def write_atomic(path, text: str):
    """Write ``text`` to ``path`` via a temporary file and rename; ``-`` is stdout."""
    if path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".spaceform-", dir=folder)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt_float(v) for v in row])
    return buf.getvalue()


def _sibling(path, suffix, fallback):
    """``path`` with its extension replaced by ``suffix``; ``fallback`` for stdout."""
    if path in (None, "-"):
        return fallback
    return os.path.splitext(path)[0] + suffix


def _note(msg):
    print(msg, file=sys.stderr)


# ------------------------------------------------------------------ config


def _surface_params(args) -> dict:
    return {name: getattr(args, name) for name in SURFACE_PARAMS if getattr(args, name, None) is not None}


def _parse_pairs(text, what):
    try:
        return [tuple(float(x) for x in part.split(":")) for part in text.split(",")]
    except ValueError:
        raise InputError(f"cannot parse {what} {text!r}") from None


def _grid(entry, args) -> ChartGrid:
    """Default grid of ``entry`` with the command-line count/range overrides applied."""
    base = entry.default_grid
    counts, ranges = base.counts, base.ranges
    if getattr(args, "counts", None):
        try:
            counts = tuple(int(x) for x in args.counts.split(","))
        except ValueError:
            raise InputError(f"cannot parse --counts {args.counts!r}") from None
    if getattr(args, "ranges", None):
        ranges = _parse_pairs(args.ranges, "--ranges")
        if any(len(r) != 2 for r in ranges):
            raise InputError("--ranges expects lo:hi per axis")
    if len(counts) != base.dim or len(ranges) != base.dim:
        raise InputError(f"{entry.id} is {base.dim}-dimensional; overrides need {base.dim} values")
    return ChartGrid(ranges, counts, base.periodic, base.margin)


def _tolerances(args) -> dict:
    out = {}
    for item in getattr(args, "claim_tol", None) or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--claim-tol expects NAME=VALUE, got {item!r}")
        try:
            out[name] = float(value)
        except ValueError:
            raise InputError(f"--claim-tol {name}: {value!r} is not a number") from None
    return out


def _jobs(args) -> int:
    if args.jobs is not None:
        jobs = args.jobs
    else:
        raw = os.environ.get(JOBS_ENV, "1")
        try:
            jobs = int(raw)
        except ValueError:
            raise InputError(f"{JOBS_ENV}={raw!r} is not an integer") from None
    if jobs < 1:
        raise InputError("--jobs must be at least 1")
    return jobs


def _jet_overrides(args) -> dict:
    out = {}
    if getattr(args, "jet_step", None) is not None:
        if not args.jet_step > 0:
            raise InputError("--jet-step must be positive")
        out["jet_step"] = args.jet_step
    if getattr(args, "jet_levels", None) is not None:
        if not 0 <= args.jet_levels <= 3:
            raise InputError("--jet-levels must lie in 0..3")
        out["jet_levels"] = args.jet_levels
    return out


# ------------------------------------------------------------------ commands


def report_csv(report) -> str:
    header = ["kind", "name", "entry", "status", "tolerance", "value", "max_abs", "max_rel", "l2_mean", "scale"]
    rows = []
    for e in report.entries:
        rows.append(["entry", e.name, e.name, "", "", "", e.max_abs, e.max_rel, e.l2_mean, e.scale])
    for v in report.verdicts:
        rows.append([
            "verdict", v.claim, v.entry or "", v.status,
            "" if v.tolerance is None else v.tolerance,
            "" if v.value is None else v.value, "", "", "", "",
        ])
    return csv_text(header, rows)


def _emit_report(report, args):
    if args.format == "csv":
        text = report_csv(report)
    else:
        text = dumps_json(report.to_dict(include_meta=not args.no_meta))
    write_atomic(args.out, text)


def _print_verdicts(report):
    for v in report.verdicts:
        val = "-" if v.value is None else f"{v.value:.3e}"
        tol = "-" if v.tolerance is None else f"{v.tolerance:.1e}"
        _note(f"  {v.status.upper():7s} {v.claim:28s} value {val:>10s}  tol {tol}")


def cmd_list(args) -> int:
    write_atomic(args.out, dumps_json({"schema": SCHEMA, "surfaces": catalog.catalog_index()}))
    return EXIT_OK


def cmd_verify(args) -> int:
    entry = catalog.instantiate(args.surface, **_surface_params(args))
    grid = _grid(entry, args)
    report = catalog.verify(
        entry, grid=grid, flip=args.flip, jobs=_jobs(args), richardson=not args.no_richardson,
        tolerances=_tolerances(args), **_jet_overrides(args),
    )
    _emit_report(report, args)
    if args.figures:
        from . import plotting

        fig = _sibling(args.out, "_residuals.png", f"{entry.id}_residuals.png")
        plotting.residual_overview(report, fig)
        _note(f"wrote {fig}")
    _note(f"{entry.id}: {'all claims hold' if report.passed else 'claim failure'}")
    _print_verdicts(report)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_ode(args) -> int:
    from . import plotting

    t0 = time.perf_counter()
    c1_text = args.c1
    # a string keeps every digit for the high-precision band computation
    sol = profile_ode.integrate_profile(c1_text, n_periods=args.periods, tol=args.tol)
    profile_ode.reconstruct_sigma(sol, samples_per_unit=args.samples_per_unit)
    rows = profile_ode.export_rows(sol)
    prefix = args.out
    csv_path, json_path, png_path = prefix + ".csv", prefix + ".json", prefix + "_phase.png"
    header = ["u", "kappa", "kappa_prime", "drift", "sigma1", "sigma2", "sigma3", "sigma4"]
    write_atomic(csv_path, csv_text(header, rows))
    plotting.phase_portrait(sol, png_path)
    summary = {
        "schema": SCHEMA,
        "c1_tilde": sol.c1_tilde,
        "c1_input": c1_text,
        "periods_requested": args.periods,
        "tol": args.tol,
        "period": sol.period,
        "period_estimates": sol.period_estimates,
        "max_drift": sol.max_drift,
        "kappa_band": list(sol.band),
        "kappa_observed": [float(np.min(sol.kappa)), float(np.max(sol.kappa))],
        "constraint_residual_max": float(np.max(np.abs(sol.constraint_residual()))),
        "sigma_norm_drift": sol.sigma_drift,
        "files": {"csv": csv_path, "phase_portrait": png_path},
    }
    code = EXIT_OK
    if args.verify:
        entry = catalog.instantiate("bicons_s3", c1_tilde=sol.c1_tilde)
        report = catalog.verify(entry, jobs=_jobs(args))
        summary["verification"] = {
            "passed": report.passed,
            "grid": report.grid,
            "verdicts": [v.to_dict() for v in report.verdicts],
        }
        if args.figures:
            fig = prefix + "_residuals.png"
            plotting.residual_overview(report, fig)
            summary["files"]["residuals"] = fig
        _note(f"assembled surface: {'all claims hold' if report.passed else 'claim failure'}")
        _print_verdicts(report)
        code = EXIT_OK if report.passed else EXIT_FAIL
    if not args.no_meta:
        summary["meta"] = {"wall_seconds": time.perf_counter() - t0, "version": __version__}
    write_atomic(json_path, dumps_json(summary))
    period = "none detected" if sol.period is None else f"{sol.period:.12g}"
    _note(f"C̃₁ = {c1_text}: period {period}, max drift {sol.max_drift:.3e}, "
          f"band [{sol.band[0]:.12g}, {sol.band[1]:.12g}]")
    _note(f"wrote {csv_path}, {json_path}, {png_path}")
    return code


def cmd_export(args) -> int:
    entry = catalog.instantiate(args.surface, **_surface_params(args))
    grid = _grid(entry, args)
    X = grid.coords()
    m = grid.dim
    pts = np.asarray(entry.chart(X), dtype=float)
    if not np.all(np.isfinite(pts)):
        raise EvaluationError(f"{entry.id} chart is not finite on the export grid")
    N = pts.shape[-1]
    header = ["u", "v", "w"][:m] + [f"x{i + 1}" for i in range(N)]
    cols = [X.reshape(-1, m), pts.reshape(-1, N)]
    if args.with_scalars:
        jets = _jet_overrides(args)
        fields = sample_surface(
            entry.chart, entry.space, grid, orientation=entry.orientation,
            h=jets.get("jet_step", entry.jet_step), richardson=jets.get("jet_levels", entry.jet_levels),
        )
        header.append("f")
        cols.append(fields.f.reshape(-1, 1))
        if m == 2:
            an = SurfaceAnalysis(fields, richardson=not args.no_richardson)
            header.append("K")
            cols.append(an.K.reshape(-1, 1))
        else:
            _note("K column omitted: intrinsic curvature is exported for surfaces only")
    # C order over the node axes is u-major
    write_atomic(args.out, csv_text(header, np.hstack(cols)))
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _add_surface_args(p):
    p.add_argument("surface", help="catalog id (see `spaceform list`)")
    g = p.add_argument_group("surface parameters (only those the family accepts)")
    for name, (flag, typ) in SURFACE_PARAMS.items():
        g.add_argument(flag, dest=name, type=typ, default=None, metavar=name.upper())
    q = p.add_argument_group("grid and stencil overrides")
    q.add_argument("--counts", help="nodes per axis, e.g. 65,65")
    q.add_argument("--ranges", help="chart box per axis, e.g. -1:1,0:2.0944")
    q.add_argument("--jet-step", type=float, help="local jet step h")
    q.add_argument("--jet-levels", type=int, help="Richardson levels for jets (0..3)")
    q.add_argument("--no-richardson", action="store_true", help="plain order-4 grid derivatives")


def _add_run_args(p):
    p.add_argument("--jobs", type=int, default=None, help=f"worker threads (default ${JOBS_ENV} or 1)")
    p.add_argument("--no-meta", action="store_true", help="omit wall-clock metadata (byte-identical reruns)")
    p.add_argument("--figures", action="store_true", help="also write a residual overview PNG")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spaceform",
        description="Grade chart-sampled hypersurfaces of constant-curvature spaces against biharmonic and biconservative identities.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="print the catalog index as JSON")
    p.add_argument("--out", default="-", help="output file (default stdout)")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("verify", help="run every check on a catalog surface and grade its claims")
    _add_surface_args(p)
    _add_run_args(p)
    p.add_argument("--flip", action="store_true", help="use the opposite unit normal")
    p.add_argument("--claim-tol", action="append", metavar="NAME=VALUE", help="override one claim tolerance")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default="-", help="report file (default stdout)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ode", help="integrate the S³ profile ODE and export the solution")
    p.add_argument("--c1", required=True, help="first-integral constant C̃₁ (> 64/3^(5/4))")
    p.add_argument("--periods", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-10, help="integrator relative tolerance")
    p.add_argument("--samples-per-unit", type=int, default=64, help="CSV rows per unit of u")
    p.add_argument("--verify", action="store_true", help="also verify the assembled surface")
    p.add_argument("--out", default="profile", help="output prefix for .csv, .json and _phase.png")
    _add_run_args(p)
    p.set_defaults(func=cmd_ode)

    p = sub.add_parser("export", help="write the chart mesh as CSV (u-major rows)")
    _add_surface_args(p)
    p.add_argument("--with-scalars", action="store_true", help="append f (and K on surfaces)")
    p.add_argument("--out", default="-", help="CSV file (default stdout)")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # reader closed early (e.g. `| head`); silence the interpreter's flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except InputError as exc:
        _note(f"spaceform: error: {exc}")
        return EXIT_USAGE
    except SpaceformError as exc:
        # GeometryError, EvaluationError, IntegrationError and the rest
        _note(f"spaceform: numerical failure ({type(exc).__name__}): {exc}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
