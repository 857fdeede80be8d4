"""Command-line front end: ``cmc1 generate | verify | gallery``.

Exit codes: 0 success, 2 usage or parse error, 3 empty or degenerate grid,
4 I/O failure, 5 a verification check failed (the report is still written).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from math import pi

from . import catalog, export
from .bianchi import bicalo_grid
from .errors import EmptyGrid, ParseError
from .expr import parse
from .grid import Domain, degeneracy_classify, degenerate_message
from .small import small_grid
from .verify import CheckResult, Tolerances, route_deviation, timed, verify_grid

EXIT_OK, EXIT_USAGE, EXIT_EMPTY, EXIT_IO, EXIT_CHECK = 0, 2, 3, 4, 5

BUILDERS = {"bianchi": bicalo_grid, "small": small_grid}


@dataclass
class JobConfig:
    expression: str
    domain: Domain
    method: str = "bianchi"
    out: str | None = None
    csv: str | None = None
    report: str | None = None
    tolerances: Tolerances = field(default_factory=Tolerances)
    timing: bool = False

    def __post_init__(self):
        if self.method not in ("bianchi", "small", "both"):
            raise ValueError(f"unknown method {self.method!r}")
        t = self.tolerances
        if min(t.h, t.gauss, t.conformality, t.equivalence) <= 0:
            raise ValueError("tolerances must be positive")

    @property
    def routes(self):
        return ["bianchi", "small"] if self.method == "both" else [self.method]


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


# -- argument parsing ------------------------------------------------------------

def _interval(text):
    try:
        lo, hi = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected <min>:<max>, got {text!r}") from None
    return lo, hi


def _shape(text):
    try:
        nr, nt = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected <nr>x<ntheta>, got {text!r}") from None
    return nr, nt


def _positive(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="cmc1", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def job_args(p, out_default):
        p.add_argument("--f", dest="expression", required=True, help="holomorphic f(tau)")
        p.add_argument("--r", type=_interval, default=(0.5, 2.0), metavar="MIN:MAX")
        p.add_argument("--theta", type=_interval, default=(0.0, 2 * pi), metavar="MIN:MAX",
                       help="radians; the upper end is excluded")
        p.add_argument("--n", type=_shape, default=(128, 128), metavar="NRxNTHETA")
        p.add_argument("--method", choices=["bianchi", "small", "both"], default="bianchi")
        p.add_argument("--out", default=out_default)
        p.add_argument("--timing", action="store_true",
                       help="record wall-clock time (output is then not reproducible)")

    gen = sub.add_parser("generate", help="sample a surface, write OBJ and CSV")
    job_args(gen, "surface.obj")
    gen.add_argument("--csv", help="CSV path (default: OBJ path with .csv suffix)")

    ver = sub.add_parser("verify", help="check a sampled surface, write a JSON report")
    job_args(ver, None)
    ver.add_argument("--report", default="report.json")
    ver.add_argument("--tol-h", type=_positive, default=Tolerances.h)
    ver.add_argument("--tol-gauss", type=_positive, default=Tolerances.gauss)
    ver.add_argument("--tol-conf", type=_positive, default=Tolerances.conformality)
    ver.add_argument("--tol-equiv", type=_positive, default=Tolerances.equivalence)

    gal = sub.add_parser("gallery", help="write the built-in examples")
    gal.add_argument("--out", default="gallery", help="output directory")
    gal.add_argument("--n", type=_shape, default=(128, 128), metavar="NRxNTHETA")
    return parser


def config_from_args(args) -> JobConfig:
    (r0, r1), (t0, t1), (nr, nt) = args.r, args.theta, args.n
    tol = Tolerances()
    if args.command == "verify":
        tol = Tolerances(args.tol_h, args.tol_gauss, args.tol_conf, args.tol_equiv)
    out = args.out
    csv_path = getattr(args, "csv", None)
    if args.command == "generate" and csv_path is None:
        csv_path = os.path.splitext(out)[0] + ".csv"
    return JobConfig(args.expression, Domain(r0, r1, t0, t1, nr, nt), args.method,
                     out=out, csv=csv_path, report=getattr(args, "report", None),
                     tolerances=tol, timing=args.timing)


# -- commands ------------------------------------------------------------------

def _grids(cfg: JobConfig):
    try:
        e = parse(cfg.expression)
    except ParseError as exc:
        raise CliError(f"parse error: {exc}", EXIT_USAGE) from None
    try:
        grids = [BUILDERS[m](e, cfg.domain) for m in cfg.routes]
        for g in grids:
            if degeneracy_classify(g) == "point_degenerate":
                raise EmptyGrid(degenerate_message(g))
    except EmptyGrid as exc:
        raise CliError(str(exc), EXIT_EMPTY) from None
    return e, grids


def cmd_generate(cfg: JobConfig) -> int:
    _, grids = _grids(cfg)
    try:
        export.write_obj(grids[0], cfg.out)
        for g in grids[1:]:
            stem, ext = os.path.splitext(cfg.out)
            export.write_obj(g, f"{stem}.{g.method}{ext or '.obj'}")
        export.write_csv(grids, cfg.csv)
    except OSError as exc:
        raise CliError(f"cannot write output: {exc}", EXIT_IO) from None
    return EXIT_OK


def run_checks(cfg: JobConfig, e, grids):
    """Checks named ``<route>.<check>``, plus ``route_equivalence`` for two routes."""
    checks = []
    for g in grids:
        try:
            rep = verify_grid(g, e, cfg.tolerances)
        except EmptyGrid as exc:
            raise CliError(str(exc), EXIT_EMPTY) from None
        checks += [CheckResult(f"{g.method}.{c.name}", c.max_residual, c.tolerance)
                   for c in rep.checks]
    if len(grids) == 2:
        checks.append(CheckResult("route_equivalence", route_deviation(*grids),
                                  cfg.tolerances.equivalence))
    return checks


def cmd_verify(cfg: JobConfig) -> int:
    def work():
        e, grids = _grids(cfg)
        return grids, run_checks(cfg, e, grids)

    (grids, checks), ms = timed(work)
    holes = max(g.hole_count for g in grids)
    report = export.build_report(cfg.expression, cfg.domain, cfg.method, checks, holes,
                                 round(ms, 3) if cfg.timing else None)
    try:
        export.write_json(report, cfg.report)
        if cfg.out:
            export.write_obj(grids[0], cfg.out)
    except OSError as exc:
        raise CliError(f"cannot write report: {exc}", EXIT_IO) from None
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK


def _range(values):
    return [float(values.min()), float(values.max())]


def cmd_gallery(out_dir="gallery", n=(128, 128)) -> int:
    entries = []
    try:
        os.makedirs(out_dir, exist_ok=True)
        for expression, name in catalog.GALLERY_NAMES.items():
            domain = catalog.gallery_domain(expression, *n)
            g = bicalo_grid(parse(expression), domain)
            path = os.path.join(out_dir, f"{name}.obj")
            nverts, nfaces = export.write_obj(g, path)
            pts = g.valid_points()
            entries.append({
                "name": name,
                "expression": expression,
                "file": f"{name}.obj",
                "domain": domain.to_dict(),
                "vertices": nverts,
                "faces": nfaces,
                "holes": g.hole_count,
                "x_range": _range(pts[:, 0]),
                "y_range": _range(pts[:, 1]),
                "z_range": _range(pts[:, 2]),
            })
        export.write_json({"method": "bianchi", "entries": entries},
                          os.path.join(out_dir, "gallery.json"))
    except OSError as exc:
        raise CliError(f"cannot write gallery: {exc}", EXIT_IO) from None
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        if args.command == "gallery":
            return cmd_gallery(args.out, args.n)
        try:
            cfg = config_from_args(args)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
        return cmd_generate(cfg) if args.command == "generate" else cmd_verify(cfg)
    except CliError as exc:
        print(f"cmc1: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
