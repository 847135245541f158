"""Command-line front end: ``screwcmc {classify,profile,tube,scan,mesh}``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import classification as cl
from . import dynamics as dyn
from . import export
from .ekt import DomainError, ScrewMotion, SpaceParams
from .quadrature import QuadratureError

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

_PI = re.compile(r"^([+-]?)(\d+(?:\.\d*)?|\.\d+)?\s*\*?\s*pi(?:\s*/\s*(\d+(?:\.\d*)?|\.\d+))?$")


def parse_number(text: str) -> float:
    """Parse a decimal or a ``pi`` literal such as ``pi/2``, ``-3pi/4``, ``2*pi``."""
    s = text.strip().lower()
    m = _PI.match(s)
    if m:
        sign, num, den = m.groups()
        value = (float(num) if num else 1.0) * math.pi / (float(den) if den else 1.0)
        return -value if sign == "-" else value
    try:
        value = float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


@dataclass(frozen=True)
class RunConfig:
    kappa: float
    tau: float
    pitch: float
    H: float
    J: float | None
    tol: dyn.Tolerances
    class_tol: cl.ClassTolerances
    out: str | None
    fmt: str | None

    @property
    def space(self) -> SpaceParams:
        return SpaceParams(self.kappa, self.tau)

    @property
    def screw(self) -> ScrewMotion:
        return ScrewMotion(self.pitch)

    def validate(self, need_J: bool = False) -> None:
        if not self.H > 0:
            raise dyn.SubcriticalError(f"H must be positive, got {self.H}")
        dyn.check_supercritical(self.space, self.H)
        if need_J and self.J is None:
            raise ValueError("--J is required for this command")


def _config(args) -> RunConfig:
    tol = dyn.DEFAULT_TOL
    if args.tol is not None:
        tol = replace(tol, rtol=args.tol, atol=args.tol)
    class_tol = cl.DEFAULT_CLASS_TOL
    if args.tol_delta is not None:
        class_tol = replace(class_tol, tol_delta=args.tol_delta)
    return RunConfig(
        args.kappa, args.tau, args.pitch, args.H, getattr(args, "J", None),
        tol, class_tol, args.out, getattr(args, "format", None),
    )


# ---------------------------------------------------------------------------
# output helpers


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    raise TypeError(f"not JSON serializable: {type(x)}")


def _clean(obj):
    """Replace non-finite floats with None so the JSON stays standard."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        return
    with open(out, "w", newline="") as fh:
        fh.write(text)


def _dump_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, default=_json_default) + "\n"


def _g(x) -> str:
    return "" if x is None else format(float(x), ".17g")


# ---------------------------------------------------------------------------
# commands


def cmd_classify(cfg: RunConfig, full_range: bool = False) -> str:
    cfg.validate(need_J=True)
    report = cl.classification_report(
        cfg.space, cfg.screw, cfg.H, cfg.J, cfg.class_tol, full_range
    )
    return _dump_json(report)


def cmd_profile(cfg: RunConfig, periods: int = 1) -> tuple[str, dict]:
    """Profile samples as CSV (``t,r,h,sigma,J_drift``) or SVG, plus a summary."""
    cfg.validate(need_J=True)
    space, screw = cfg.space, cfg.screw
    j_max, _ = dyn.energy_bounds(space, cfg.H)
    summary = {"J": cfg.J, "periods": periods}
    if abs(cfg.J - j_max) <= cfg.tol.tol_J:
        # the cylinder has no natural period; one period is unit arclength
        r0 = dyn.cylinder_radius(space, cfg.H)
        start = dyn.ProfileState(0.0, r0, 0.0, dyn.HALF_PI)
        curve = dyn.integrate_curve(space, screw, cfg.H, start, float(periods), cfg.tol)
        summary.update(regime=dyn.Regime.CYLINDER.value, delta=None, half_period=None)
        poly = export.cylinder_polyline(space, screw, cfg.H, float(periods))
    else:
        arc = dyn.integrate_half_arc(space, screw, cfg.H, cfg.J, cfg.tol)
        curve = dyn.extend_curve(arc, periods)
        summary.update(
            regime=arc.regime.value,
            delta=curve.delta,
            half_period=arc.t2,
            h_prime_terminal=arc.h_prime_terminal,
            h_prime_limit=arc.h_prime_limit,
        )
        poly = export.polyline_from_arc(arc, periods)
    summary["max_energy_drift"] = float(np.max(np.abs(curve.j_drift)))
    summary["rows"] = len(curve.t)
    buf = io.StringIO()
    if (cfg.fmt or "csv") == "svg":
        export.write_profile_svg(poly, buf, space=space)
    elif (cfg.fmt or "csv") == "csv":
        dyn.write_profile_csv(curve, buf)
    else:
        raise ValueError(f"profile output must be csv or svg, not {cfg.fmt}")
    return buf.getvalue(), summary


def cmd_tube(cfg: RunConfig) -> str:
    cfg.validate()
    verdict = cl.tube_exists(cfg.space, cfg.screw, cfg.H)
    report = {
        "kappa": cfg.kappa,
        "tau": cfg.tau,
        "pitch": cfg.pitch,
        "H": cfg.H,
        "exists": verdict.exists,
        "case": verdict.case,
        "bound": verdict.bound,
        "on_boundary": verdict.on_boundary,
        "all_tubes": verdict.all_tubes,
    }
    if verdict.exists:
        cert = cl.tube_energy(cfg.space, cfg.screw, cfg.H, cfg.class_tol, verdict=verdict)
        report.update(
            j_a=cert.j_a,
            j_b=cert.j_b,
            j_tube=cert.j_tube,
            residual=cert.residual,
            iterations=cert.iterations,
            exact=cert.exact,
            extra_sign_changes=cert.extra_sign_changes,
        )
    return _dump_json(report)


SCAN_HEADER = ("J", "class", "delta", "r_minus", "r_plus")


def _scan_rows(cfg: RunConfig, grid: cl.JGrid, full_range: bool):
    res = cl.moduli_scan(cfg.space, cfg.screw, cfg.H, grid, cfg.class_tol, full_range)
    for row in res.rows:
        kind = row.kind.value if row.kind is not None else "Error"
        yield [_g(row.J), kind, _g(row.delta), _g(row.r_minus), _g(row.r_plus)]


def cmd_scan(
    cfg: RunConfig,
    grid: cl.JGrid,
    full_range: bool = True,
    sweep_kappa: tuple[float, float, int] | None = None,
) -> str:
    """CSV moduli table; with ``sweep_kappa`` a leading ``kappa`` column is added."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if sweep_kappa is None:
        cfg.validate()
        writer.writerow(SCAN_HEADER)
        writer.writerows(_scan_rows(cfg, grid, full_range))
        return buf.getvalue()
    k0, k1, n = sweep_kappa
    kappas = np.linspace(k0, k1, n)
    configs = [replace(cfg, kappa=float(k)) for k in kappas]
    for c in configs:
        c.validate()
    writer.writerow(("kappa",) + SCAN_HEADER)
    for c in configs:
        for row in _scan_rows(c, grid, full_range):
            writer.writerow([_g(c.kappa)] + row)
    return buf.getvalue()


def cmd_mesh(
    cfg: RunConfig,
    periods: int = 1,
    theta_max: float = 2 * math.pi,
    theta_samples: int = export.THETA_SAMPLES,
    samples: int = export.PROFILE_SAMPLES,
    chart: str = "cylindrical",
) -> str:
    cfg.validate(need_J=True)
    poly = export.profile_polyline(
        cfg.space, cfg.screw, cfg.H, cfg.J, periods, samples, cfg.tol
    )
    mesh = export.build_surface_points(
        cfg.space, cfg.screw, poly, (0.0, theta_max), theta_samples, chart
    )
    buf = io.StringIO()
    export.write_obj(mesh, buf)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# argument parsing


def _sweep(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected KMIN:KMAX:N")
    return parse_number(parts[0]), parse_number(parts[1]), _positive_int(parts[2])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kappa", type=parse_number, required=True)
    common.add_argument("--tau", type=parse_number, default=0.0)
    common.add_argument("--pitch", type=parse_number, default=0.0)
    common.add_argument("--H", type=parse_number, required=True)
    common.add_argument("--tol", type=float, default=None,
                        help="integrator rtol/atol override")
    common.add_argument("--tol-delta", type=float, default=None,
                        help="tube detection tolerance on Delta")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    p = argparse.ArgumentParser(prog="screwcmc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="classify one surface (JSON)")
    c.add_argument("--J", type=parse_number, required=True)
    c.add_argument("--full-range", action="store_true",
                   help="kappa>0: classify J < -2H/kappa directly, not via the axis swap")
    c.add_argument("--format", choices=["json"], default="json")

    c = sub.add_parser("profile", parents=[common], help="profile curve (CSV or SVG)")
    c.add_argument("--J", type=parse_number, required=True)
    c.add_argument("--periods", type=_positive_int, default=1)
    c.add_argument("--format", choices=["csv", "svg"], default="csv")

    c = sub.add_parser("tube", parents=[common], help="tube existence and energy (JSON)")
    c.add_argument("--format", choices=["json"], default="json")

    c = sub.add_parser("scan", parents=[common], help="moduli scan over J (CSV)")
    c.add_argument("--grid", type=_positive_int, default=41)
    c.add_argument("--J-min", dest="j_min", type=parse_number, default=None)
    c.add_argument("--J-max", dest="j_max", type=parse_number, default=None)
    c.add_argument("--via-partner", action="store_true",
                   help="kappa>0: classify J < -2H/kappa through the axis swap")
    c.add_argument("--sweep-kappa", type=_sweep, default=None, metavar="KMIN:KMAX:N")
    c.add_argument("--format", choices=["csv"], default="csv")

    c = sub.add_parser("mesh", parents=[common], help="swept surface mesh (OBJ)")
    c.add_argument("--J", type=parse_number, required=True)
    c.add_argument("--periods", type=_positive_int, default=1)
    c.add_argument("--theta-max", type=parse_number, default=2 * math.pi)
    c.add_argument("--theta-samples", type=int, default=export.THETA_SAMPLES)
    c.add_argument("--samples", type=_positive_int, default=export.PROFILE_SAMPLES,
                   help="profile samples per half arc")
    c.add_argument("--chart", choices=export.CHARTS, default="cylindrical")
    c.add_argument("--format", choices=["obj"], default="obj")
    return p


_INPUT_ERRORS = (
    dyn.SubcriticalError,
    dyn.EnergyOutOfRange,
    DomainError,
    cl.SpaceformCase,
    export.MeshError,
)
_NUMERIC_ERRORS = (
    dyn.IntegrationError,
    cl.NoSignChange,
    QuadratureError,
    ArithmeticError,
)


def _dispatch(args) -> str:
    cfg = _config(args)
    if args.command == "classify":
        return cmd_classify(cfg, args.full_range)
    if args.command == "profile":
        text, summary = cmd_profile(cfg, args.periods)
        sys.stderr.write(_dump_json(summary))
        return text
    if args.command == "tube":
        return cmd_tube(cfg)
    if args.command == "scan":
        grid = cl.JGrid(n=args.grid, lo=args.j_min, hi=args.j_max)
        return cmd_scan(cfg, grid, not args.via_partner, args.sweep_kappa)
    return cmd_mesh(
        cfg, args.periods, args.theta_max, args.theta_samples, args.samples, args.chart
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = _dispatch(args)
    except _INPUT_ERRORS as exc:
        print(f"screwcmc: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except _NUMERIC_ERRORS as exc:
        print(f"screwcmc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"screwcmc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"screwcmc: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        _emit(text, args.out)
    except OSError as exc:
        print(f"screwcmc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
