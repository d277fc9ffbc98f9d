"""Command-line front end: every computation as a subcommand.

Output is CSV by default (JSON with --format json), one row per query
point, always carrying the certified absolute error bound column.
Numeric fields render with 17 significant digits so rows round-trip
losslessly.  Exit codes: 0 success, 2 domain error, 3 series/quadrature
non-convergence, 4 validation failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import epd, maximum, position, simulate, validate
from .errors import CapacityError, DomainError, QuadratureError, \
    SeriesTruncationError
from .params import MotionParams, Velocity
from .special import SeriesConfig

USAGE_EXIT = 64
DOMAIN_EXIT = 2
SERIES_EXIT = 3
VALIDATION_EXIT = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        sys.exit(USAGE_EXIT)


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _emit(rows: list[dict], args) -> None:
    stream = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.format == "json":
            json.dump([{k: (float(v) if isinstance(v, np.floating) else v)
                        for k, v in row.items()} for row in rows],
                      stream, indent=2, sort_keys=True)
            stream.write("\n")
        else:
            header = list(rows[0].keys()) if rows else []
            stream.write(",".join(header) + "\n")
            for row in rows:
                stream.write(",".join(_fmt(row[k]) for k in header) + "\n")
    finally:
        if args.out:
            stream.close()


def _grid(single, grid_spec, label: str) -> np.ndarray:
    if grid_spec is not None:
        lo, hi, num = grid_spec.split(":")
        return np.linspace(float(lo), float(hi), int(num))
    if single is None:
        raise DomainError(f"provide --{label} or --{label}-grid")
    return np.array([float(single)])


def _params(args) -> MotionParams:
    return MotionParams(args.c1, args.c2, args.rate)


def _motion_flags(sub, rate_default=0.0):
    sub.add_argument("--c1", type=float, required=True)
    sub.add_argument("--c2", type=float, required=True)
    sub.add_argument("--lambda", dest="rate", type=float, default=rate_default)
    sub.add_argument("--t", type=float, required=True)


def _output_flags(sub):
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--out", default=None)


def _cond_flags(sub):
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--count", type=int)
    group.add_argument("--unconditional", action="store_true")
    sub.add_argument("--v0", choices=("plus", "minus"), required=True)


def build_parser() -> _Parser:
    parser = _Parser(prog="telemax",
                     description="Laws of the asymmetric telegraph process"
                                 " and their validation tooling")
    subs = parser.add_subparsers(dest="command", required=True)

    for name in ("max-cdf", "max-pdf"):
        sub = subs.add_parser(name)
        _motion_flags(sub)
        _cond_flags(sub)
        sub.add_argument("--beta", type=float)
        sub.add_argument("--beta-grid", dest="beta_grid")
        sub.add_argument("--tol", type=float, default=1e-12)
        _output_flags(sub)

    sub = subs.add_parser("point-mass")
    _motion_flags(sub)
    sub.add_argument("--v0", choices=("plus", "minus"), required=True)
    sub.add_argument("--count", type=int, default=None)
    sub.add_argument("--tol", type=float, default=1e-12)
    _output_flags(sub)

    sub = subs.add_parser("position-pdf")
    _motion_flags(sub)
    sub.add_argument("--x", type=float)
    sub.add_argument("--x-grid", dest="x_grid")
    sub.add_argument("--count", type=int, default=None)
    sub.add_argument("--v0", choices=("plus", "minus"), default=None)
    sub.add_argument("--tol", type=float, default=1e-12)
    _output_flags(sub)

    sub = subs.add_parser("nonhom-pdf")
    sub.add_argument("--c1", type=float, required=True)
    sub.add_argument("--c2", type=float, required=True)
    sub.add_argument("--alpha", type=float, required=True)
    sub.add_argument("--t", type=float, required=True)
    sub.add_argument("--x", type=float)
    sub.add_argument("--x-grid", dest="x_grid")
    _output_flags(sub)

    sub = subs.add_parser("a-triangle")
    sub.add_argument("--k", type=int, required=True)
    _output_flags(sub)

    sub = subs.add_parser("epd-check")
    sub.add_argument("--family", choices=[f.value for f in epd.Family],
                     required=True)
    sub.add_argument("--c1", type=float, required=True)
    sub.add_argument("--c2", type=float, required=True)
    sub.add_argument("--lambda", dest="rate", type=float, default=0.0)
    sub.add_argument("--m", type=float, default=1.0)
    sub.add_argument("--n", type=float, default=1.0)
    sub.add_argument("--r", type=float, default=0.0)
    sub.add_argument("--alpha", type=float, default=None)
    sub.add_argument("--x0", type=float, required=True)
    sub.add_argument("--t0", type=float, required=True)
    sub.add_argument("--h", type=float, default=1.0 / 64.0)
    sub.add_argument("--levels", type=int, default=3)
    _output_flags(sub)

    sub = subs.add_parser("sample")
    _motion_flags(sub)
    sub.add_argument("--v0", choices=("plus", "minus"), required=True)
    sub.add_argument("--count", type=int, default=None)
    sub.add_argument("--alpha", type=float, default=None)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--samples", type=int, default=1000)
    _output_flags(sub)

    sub = subs.add_parser("validate")
    sub.add_argument("--suite", default="all",
                     choices=["all", *validate.SUITES])
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--samples", type=int, default=1_000_000)
    _output_flags(sub)
    return parser


def _law_rows(args, density: bool) -> list[dict]:
    p = _params(args)
    cfg = SeriesConfig(tail_tolerance=args.tol)
    v0 = Velocity(args.v0)
    cond = "unconditional" if args.unconditional else f"count={args.count}"
    rows = []
    for beta in _grid(args.beta, args.beta_grid, "beta"):
        if density:
            if args.unconditional:
                raise DomainError("max-pdf needs --count; the unconditional"
                                  " law mixes a density with point masses")
            law = maximum.max_pdf(p, _query(args, beta, v0))
        elif args.unconditional:
            law = (maximum.max_cdf_plus_unconditional(p, args.t, beta, cfg)
                   if v0 is Velocity.PLUS else
                   maximum.max_cdf_minus_unconditional(p, args.t, beta, cfg))
        else:
            law = maximum.max_cdf(p, _query(args, beta, v0))
        rows.append({"c1": p.c1, "c2": p.c2, "lambda": p.rate, "t": args.t,
                     "v0": v0.value, "cond": cond, "beta": float(beta),
                     "value": law.value,
                     "abs_error_bound": law.abs_error_bound})
    return rows


def _query(args, beta, v0):
    from .params import MaxQuery
    return MaxQuery(args.t, float(beta), v0,
                    None if args.unconditional else args.count)


def _cmd_point_mass(args) -> list[dict]:
    p = _params(args)
    v0 = Velocity(args.v0)
    cfg = SeriesConfig(tail_tolerance=args.tol)
    if v0 is Velocity.PLUS:
        if args.count is not None:
            raise DomainError("the PLUS-start atom exists only for the"
                              " unconditional law (zero reversals)")
        law = maximum.max_point_mass_plus(p, args.t)
        beta = p.c1 * args.t
        cond = "unconditional"
    elif args.count is None:
        law = maximum.zero_mass_unconditional(p, args.t, cfg)
        beta = 0.0
        cond = "unconditional"
    else:
        law = maximum.zero_mass_count(p, args.count)
        beta = 0.0
        cond = f"count={args.count}"
    return [{"c1": p.c1, "c2": p.c2, "lambda": p.rate, "t": args.t,
             "v0": v0.value, "cond": cond, "beta": beta, "value": law.value,
             "abs_error_bound": law.abs_error_bound}]


def _cmd_position(args) -> list[dict]:
    p = _params(args)
    cfg = SeriesConfig(tail_tolerance=args.tol)
    v0 = Velocity(args.v0) if args.v0 else None
    cond = "unconditional" if args.count is None else f"count={args.count}"
    rows = []
    for x in _grid(args.x, args.x_grid, "x"):
        if args.count is None:
            law = position.position_pdf(p, args.t, float(x), cfg)
        else:
            law = position.position_pdf_given_count(p, args.t, float(x),
                                                    args.count, v0)
        rows.append({"c1": p.c1, "c2": p.c2, "lambda": p.rate, "t": args.t,
                     "cond": cond, "v0": args.v0 or "", "x": float(x),
                     "value": law.value,
                     "abs_error_bound": law.abs_error_bound})
    return rows


def _cmd_nonhom(args) -> list[dict]:
    p = MotionParams(args.c1, args.c2, 0.0)
    rows = []
    for x in _grid(args.x, args.x_grid, "x"):
        law = position.nonhomogeneous_position_pdf(p, args.alpha, args.t,
                                                   float(x))
        rows.append({"c1": p.c1, "c2": p.c2, "alpha": args.alpha, "t": args.t,
                     "x": float(x), "value": law.value,
                     "abs_error_bound": law.abs_error_bound})
    return rows


def _cmd_epd(args) -> list[dict]:
    p = MotionParams(args.c1, args.c2, args.rate)
    spec = epd.EpdSpec(epd.Family(args.family), m=args.m, n=args.n, r=args.r,
                       alpha=args.alpha)
    grid = epd.GridSpec(args.x0, args.t0, args.h, args.levels)
    study = epd.epd_residual(spec, p, grid)
    rows = []
    for i, h in enumerate(study.steps):
        rows.append({"family": args.family, "m": args.m, "n": args.n,
                     "r": args.r, "alpha": args.alpha if args.alpha else "",
                     "x0": args.x0, "t0": args.t0, "level": i, "h": h,
                     "residual": study.residuals[i],
                     "ratio": study.ratios[i - 1] if i > 0 else "",
                     "roundoff_floor": study.floor[i]})
    return rows


def _cmd_sample(args) -> list[dict]:
    p = _params(args)
    v0 = Velocity(args.v0)
    batch = simulate.simulate_batch(p, args.t, v0, args.samples,
                                    seed=args.seed, count=args.count,
                                    alpha=args.alpha)
    return [{"index": i, "v0": v0.value, "count": int(batch.counts[i]),
             "realized_max": batch.maxima[i], "endpoint": batch.endpoints[i]}
            for i in range(args.samples)]


def _cmd_validate(args) -> tuple[list[dict], bool]:
    results = validate.run_validation(args.suite, seed=args.seed,
                                      samples=args.samples)
    rows = [{"suite": args.suite, "check": r.name,
             "status": "pass" if r.passed else "FAIL",
             "statistic": r.statistic, "threshold": r.threshold,
             "detail": r.detail} for r in results]
    return rows, all(r.passed for r in results)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "max-cdf":
            rows = _law_rows(args, density=False)
        elif args.command == "max-pdf":
            rows = _law_rows(args, density=True)
        elif args.command == "point-mass":
            rows = _cmd_point_mass(args)
        elif args.command == "position-pdf":
            rows = _cmd_position(args)
        elif args.command == "nonhom-pdf":
            rows = _cmd_nonhom(args)
        elif args.command == "a-triangle":
            if args.format == "json":
                rows = [{"k": args.k, "row": maximum.a_triangle(args.k)}]
            else:
                sys.stdout.write(
                    ",".join(str(v) for v in maximum.a_triangle(args.k)) + "\n")
                return 0
        elif args.command == "epd-check":
            rows = _cmd_epd(args)
        elif args.command == "sample":
            rows = _cmd_sample(args)
        elif args.command == "validate":
            rows, ok = _cmd_validate(args)
            _emit(rows, args)
            return 0 if ok else VALIDATION_EXIT
        else:  # pragma: no cover - argparse enforces the choices
            return USAGE_EXIT
    except (DomainError, CapacityError) as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return DOMAIN_EXIT
    except (SeriesTruncationError, QuadratureError) as exc:
        sys.stderr.write(f"convergence error: {exc}\n")
        return SERIES_EXIT
    _emit(rows, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
