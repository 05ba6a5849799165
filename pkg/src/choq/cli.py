"""Command-line front end.

Subcommands
-----------
``content``
    Dyadic content of a rasterized shape; optionally dumps the optimal cover.
``choquet``
    Content integral of a function preset; optionally dumps the distribution
    step function.
``maximal`` / ``riesz``
    Evaluate the fractional maximal function / Riesz potential of a preset
    and print summary values; optionally dump the full grid as CSV.
``verify poincare|sobolev|zero-boundary|adams|hedberg``
    Run one inequality report and print it as JSON (or write CSV/JSON).
``sweep maximal``
    Maximal-operator ratio sweep over a seeded preset family and level range.
``sharpness``
    Resolution scan of the shifted power-function integral on the punctured
    ball.
``selftest``
    Internal consistency battery; exits non-zero on any failure.

All flags are long-form.  Level ranges are written ``a..b`` (inclusive).
Identical invocations produce byte-identical stdout and output files; worker
parallelism is capped by the ``CHOQUET_THREADS`` environment variable and
never affects results.

Exit codes: 0 success; 1 I/O error; 2 parameter/usage error; 3 violated
invariant (consistency failure, violation, or failed selftest).
"""

from __future__ import annotations

import argparse
import json
import sys

from .choquet import choquet_integral, distribution_function, power_integral
from .content import ContentParams, dyadic_content, dyadic_optimal_cover
from .domains import (
    BallDomain,
    Domain,
    PolygonDomain,
    PuncturedBallDomain,
    SquareDomain,
    make_domain,
)
from .errors import ConsistencyError, InputError, ParameterError, ViolationError
from .grid import DyadicGrid, write_function_csv
from .inequalities import (
    InequalityParams,
    adams_report,
    max_ratio_by_level,
    maximal_sweep,
    poincare_report,
    sharpness_scan,
    sobolev_report,
    write_reports_csv,
    write_reports_json,
    zero_boundary_report,
)
from .operators import MaximalParams, fractional_maximal, hedberg_bound, riesz_potential
from .presets import (
    BumpPreset,
    LinearPreset,
    PowerPreset,
    TrigPreset,
    eval_preset,
    sweep_family,
)
from . import selftest as selftest_mod

# Measured slack on the pointwise split bound: the inside constant is exact,
# the outside constant is calibration (default 1), and `verify hedberg`
# flags any cell exceeding the combined bound by more than 5%.
SPLIT_BOUND_SLACK = 1.05


# ---------------------------------------------------------------------------
# Flag parsing helpers
# ---------------------------------------------------------------------------


def parse_levels(text: str) -> range:
    """Parse an inclusive level range ``a..b`` (or a single level ``a``)."""
    parts = text.split("..")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError(text)
    except ValueError:
        raise ParameterError(f"levels must look like A..B, got {text!r}") from None
    if lo > hi:
        raise ParameterError(f"empty level range {text!r}")
    return range(lo, hi + 1)


def parse_point(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParameterError(f"point must look like X,Y, got {text!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise ParameterError(f"point must look like X,Y, got {text!r}") from None


def parse_vertices(text: str) -> list[tuple[float, float]]:
    pts = [parse_point(part) for part in text.split(";") if part]
    if len(pts) < 3:
        raise ParameterError("polygon needs at least 3 vertices, semicolon-separated")
    return pts


def build_domain(args: argparse.Namespace, grid: DyadicGrid) -> Domain:
    preset = args.preset
    if preset == "ball":
        return make_domain(BallDomain(args.radius, parse_point(args.center)), grid)
    if preset == "square":
        return make_domain(SquareDomain(args.side, parse_point(args.center)), grid)
    if preset == "punctured_ball":
        return make_domain(PuncturedBallDomain(args.radius, parse_point(args.center)), grid)
    if preset == "polygon":
        if not args.vertices:
            raise ParameterError("--preset polygon requires --vertices")
        return make_domain(PolygonDomain(parse_vertices(args.vertices)), grid)
    raise ParameterError(f"unknown domain preset {preset!r}")


def build_function(args: argparse.Namespace):
    kind = args.function
    if kind == "trig":
        return TrigPreset(seed=args.seed, modes=args.modes)
    if kind == "bump":
        return BumpPreset(parse_point(args.bump_center), args.bump_radius)
    if kind == "power":
        return PowerPreset(args.power_exponent, parse_point(args.origin))
    if kind == "linear":
        a, b, c = (float(t) for t in args.coeffs.split(","))
        return LinearPreset(a, b, c)
    raise ParameterError(f"unknown function preset {kind!r}")


def _emit_reports(reports, args) -> None:
    if args.out:
        if args.format == "json":
            write_reports_json(reports, args.out)
        else:
            write_reports_csv(reports, args.out)


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


# ---------------------------------------------------------------------------
# Subcommand bodies
# ---------------------------------------------------------------------------


def cmd_content(args: argparse.Namespace) -> int:
    grid = DyadicGrid(args.level)
    domain = build_domain(args, grid)
    params = ContentParams(args.delta)
    value = dyadic_content(domain.mask, params)
    print(repr(value))
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(dyadic_optimal_cover(domain.mask, params).dumps())
            fh.write("\n")
    return 0


def cmd_choquet(args: argparse.Namespace) -> int:
    grid = DyadicGrid(args.level)
    mask = build_domain(args, grid).mask if args.preset else None
    f = eval_preset(build_function(args), grid, mask)
    params = ContentParams(args.delta)
    if args.q == 1.0:
        value = choquet_integral(f, params, mask)
    else:
        value = power_integral(f, params, args.q, mask)
    print(repr(value))
    if args.out:
        distribution_function(f, params, mask).write_csv(args.out)
    return 0


def cmd_maximal(args: argparse.Namespace) -> int:
    grid = DyadicGrid(args.level)
    mask = build_domain(args, grid).mask if args.preset else None
    f = eval_preset(build_function(args), grid, mask)
    m = fractional_maximal(f, mask, MaximalParams(args.kappa))
    print(repr(float(m.values.max())))
    if args.out:
        write_function_csv(m, args.out)
    return 0


def cmd_riesz(args: argparse.Namespace) -> int:
    grid = DyadicGrid(args.level)
    mask = build_domain(args, grid).mask if args.preset else None
    f = eval_preset(build_function(args), grid, mask)
    pot = riesz_potential(f, mask)
    print(repr(float(pot.values.max())))
    if args.out:
        write_function_csv(pot, args.out)
    return 0


def _verify_common(args: argparse.Namespace):
    grid = DyadicGrid(args.level)
    domain = build_domain(args, grid)
    f = eval_preset(build_function(args), grid, domain.mask)
    return domain, f


def cmd_verify_poincare(args: argparse.Namespace) -> int:
    domain, f = _verify_common(args)
    params = InequalityParams(p=args.p, delta=args.delta, kappa=args.kappa, q=args.q)
    report = poincare_report(f, domain, params)
    _print_json(report.to_json())
    _emit_reports([report], args)
    return 0


def cmd_verify_sobolev(args: argparse.Namespace) -> int:
    domain, f = _verify_common(args)
    params = InequalityParams(p=args.p, delta=args.delta, kappa=args.kappa, q=args.q)
    report = sobolev_report(f, domain, params)
    _print_json(report.to_json())
    _emit_reports([report], args)
    return 0


def cmd_verify_zero_boundary(args: argparse.Namespace) -> int:
    domain, f = _verify_common(args)
    params = InequalityParams(p=args.p, delta=args.delta, kappa=args.kappa, q=args.q)
    report = zero_boundary_report(f, domain, params, variant=args.variant)
    _print_json(report.to_json())
    _emit_reports([report], args)
    return 0


def cmd_verify_adams(args: argparse.Namespace) -> int:
    domain, f = _verify_common(args)
    report = adams_report(f, domain)
    _print_json(report.to_json())
    _emit_reports([report], args)
    return 0


def cmd_verify_hedberg(args: argparse.Namespace) -> int:
    grid = DyadicGrid(args.level)
    mask = build_domain(args, grid).mask if args.preset else None
    f = eval_preset(build_function(args), grid, mask)
    report = hedberg_bound(
        f, mask, args.p, args.delta, args.kappa, outside_constant=args.outside_constant
    )
    _print_json(
        {
            "level": report.level,
            "p": report.p,
            "delta": report.delta,
            "kappa": report.kappa,
            "inside_constant": report.inside_constant,
            "outside_constant": report.outside_constant,
            "max_ratio": report.max_ratio,
        }
    )
    if args.out:
        report.write_csv(args.out)
    if report.max_ratio > SPLIT_BOUND_SLACK:
        raise ViolationError(
            f"split bound violated: max ratio {report.max_ratio!r} exceeds {SPLIT_BOUND_SLACK}"
        )
    return 0


def cmd_sweep_maximal(args: argparse.Namespace) -> int:
    params = InequalityParams(p=args.p, delta=args.delta, kappa=args.kappa, q=args.q)
    family = sweep_family(args.size, args.seed)
    reports = maximal_sweep(family, params, parse_levels(args.levels))
    for level, ratio in sorted(max_ratio_by_level(reports).items()):
        print(f"level {level}: max ratio {ratio!r}")
    _emit_reports(reports, args)
    return 0


def cmd_sharpness(args: argparse.Namespace) -> int:
    params = InequalityParams(p=args.p, delta=args.delta, kappa=args.kappa)
    reports = sharpness_scan(args.q, args.mu, params, parse_levels(args.levels), args.radius)
    for r in reports:
        print(f"level {r.level}: lhs {r.lhs!r} rhs {r.rhs!r} b_star {r.b_star!r}")
    _emit_reports(reports, args)
    return 0


def cmd_selftest(args: argparse.Namespace) -> int:
    failures = selftest_mod.run(fast=args.fast)
    if failures:
        raise ViolationError(f"selftest failed {failures} check(s)")
    return 0


# ---------------------------------------------------------------------------
# Parser assembly
# ---------------------------------------------------------------------------


def _domain_flags(required: bool = False) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument(
        "--preset",
        choices=["ball", "square", "polygon", "punctured_ball"],
        default="ball" if required else None,
        help="domain shape preset" + ("" if required else " (default: whole unit square)"),
    )
    p.add_argument("--radius", type=float, default=0.4, help="ball radius (default 0.4)")
    p.add_argument("--side", type=float, default=0.8, help="square side (default 0.8)")
    p.add_argument("--center", default="0.5,0.5", help="shape center X,Y (default 0.5,0.5)")
    p.add_argument("--vertices", default=None, help="polygon vertices X,Y;X,Y;...")
    return p


def _function_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument(
        "--function",
        choices=["trig", "bump", "power", "linear"],
        default="trig",
        help="function preset (default trig)",
    )
    p.add_argument("--seed", type=int, default=0, help="trig preset seed (default 0)")
    p.add_argument("--modes", type=int, default=3, help="trig mode count (default 3)")
    p.add_argument("--bump-center", default="0.5,0.5", help="bump center X,Y")
    p.add_argument("--bump-radius", type=float, default=0.3, help="bump support radius")
    p.add_argument("--power-exponent", type=float, default=-0.3, help="power preset exponent")
    p.add_argument("--origin", default="0.5,0.5", help="power preset origin X,Y")
    p.add_argument("--coeffs", default="1.0,0.0,0.0", help="linear preset A,B,C")
    return p


def _output_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--out", default=None, help="output file path")
    p.add_argument("--format", choices=["csv", "json"], default="csv", help="output format")
    return p


def _ineq_flags(defaults: dict | None = None) -> argparse.ArgumentParser:
    d = {"p": 1.2, "delta": 2.0, "kappa": 0.0, "level": 7}
    d.update(defaults or {})
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--p", type=float, default=d["p"], help=f"integrability exponent (default {d['p']})")
    p.add_argument("--delta", type=float, default=d["delta"], help=f"content dimension (default {d['delta']})")
    p.add_argument("--kappa", type=float, default=d["kappa"], help=f"smoothing order (default {d['kappa']})")
    p.add_argument("--q", type=float, default=None, help="left-side exponent (default: derived)")
    p.add_argument("--level", type=int, default=d["level"], help=f"grid level (default {d['level']})")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="choq",
        description="Dyadic-content integrals, potentials, and inequality reports on the unit square.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser(
        "content",
        parents=[_domain_flags(required=True), _output_flags()],
        help="dyadic content of a shape",
    )
    p.add_argument("--delta", type=float, default=2.0, help="content dimension (default 2)")
    p.add_argument("--level", type=int, default=6, help="grid level (default 6)")
    p.set_defaults(func=cmd_content)

    p = sub.add_parser(
        "choquet",
        parents=[_domain_flags(), _function_flags(), _output_flags()],
        help="content integral of a function preset",
    )
    p.add_argument("--delta", type=float, default=2.0, help="content dimension (default 2)")
    p.add_argument("--q", type=float, default=1.0, help="integrand exponent (default 1)")
    p.add_argument("--level", type=int, default=6, help="grid level (default 6)")
    p.set_defaults(func=cmd_choquet)

    p = sub.add_parser(
        "maximal",
        parents=[_domain_flags(), _function_flags(), _output_flags()],
        help="fractional maximal function of a preset",
    )
    p.add_argument("--kappa", type=float, default=0.0, help="smoothing order (default 0)")
    p.add_argument("--level", type=int, default=6, help="grid level (default 6)")
    p.set_defaults(func=cmd_maximal)

    p = sub.add_parser(
        "riesz",
        parents=[_domain_flags(), _function_flags(), _output_flags()],
        help="Riesz potential of a preset",
    )
    p.add_argument("--level", type=int, default=6, help="grid level (default 6)")
    p.set_defaults(func=cmd_riesz)

    verify = sub.add_parser("verify", help="run one inequality report")
    vsub = verify.add_subparsers(dest="check", required=True, metavar="CHECK")

    p = vsub.add_parser(
        "poincare",
        parents=[_domain_flags(required=True), _function_flags(), _ineq_flags(), _output_flags()],
        help="shifted p-integral against the gradient p-integral",
    )
    p.set_defaults(func=cmd_verify_poincare)

    p = vsub.add_parser(
        "sobolev",
        parents=[
            _domain_flags(required=True),
            _function_flags(),
            _ineq_flags({"p": 1.5}),
            _output_flags(),
        ],
        help="higher-exponent shifted norm against the gradient norm",
    )
    p.set_defaults(func=cmd_verify_sobolev)

    p = vsub.add_parser(
        "zero-boundary",
        parents=[
            _domain_flags(required=True),
            _function_flags(),
            _ineq_flags({"p": 1.2}),
            _output_flags(),
        ],
        help="compactly supported norms without shift",
    )
    p.add_argument("--variant", choices=["a", "b"], default="a", help="report variant (default a)")
    p.set_defaults(func=cmd_verify_zero_boundary, function="bump")

    p = vsub.add_parser(
        "adams",
        parents=[_domain_flags(required=True), _function_flags(), _output_flags()],
        help="length-scale content integral against the gradient area integral",
    )
    p.add_argument("--level", type=int, default=7, help="grid level (default 7)")
    p.set_defaults(func=cmd_verify_adams, function="bump")

    p = vsub.add_parser(
        "hedberg",
        parents=[_domain_flags(), _function_flags(), _ineq_flags({"p": 1.5}), _output_flags()],
        help="pointwise split bound on the Riesz potential",
    )
    p.add_argument(
        "--outside-constant",
        type=float,
        default=1.0,
        help="calibrated tail constant (default 1.0)",
    )
    p.set_defaults(func=cmd_verify_hedberg)

    sweep = sub.add_parser("sweep", help="ratio sweeps over preset families")
    ssub = sweep.add_subparsers(dest="target", required=True, metavar="TARGET")
    p = ssub.add_parser(
        "maximal",
        parents=[_output_flags()],
        help="maximal-operator ratio sweep over a seeded family",
    )
    p.add_argument("--size", type=int, default=50, help="family size (default 50)")
    p.add_argument("--seed", type=int, default=0, help="family seed (default 0)")
    p.add_argument("--p", type=float, default=1.0, help="exponent (default 1.0)")
    p.add_argument("--delta", type=float, default=1.5, help="content dimension (default 1.5)")
    p.add_argument("--kappa", type=float, default=0.0, help="smoothing order (default 0)")
    p.add_argument("--q", type=float, default=None, help="left-side exponent (default: derived)")
    p.add_argument("--levels", default="7..8", help="inclusive level range A..B (default 7..8)")
    p.set_defaults(func=cmd_sweep_maximal)

    p = sub.add_parser(
        "sharpness",
        parents=[_output_flags()],
        help="resolution scan of the shifted power-function integral",
    )
    p.add_argument("--p", type=float, default=1.5, help="exponent (default 1.5)")
    p.add_argument("--delta", type=float, default=2.0, help="content dimension (default 2)")
    p.add_argument("--kappa", type=float, default=0.0, help="smoothing order (default 0)")
    p.add_argument("--q", type=float, required=True, help="left-side exponent")
    p.add_argument("--mu", type=float, required=True, help="power-function exponent")
    p.add_argument("--radius", type=float, default=0.45, help="punctured ball radius (default 0.45)")
    p.add_argument("--levels", default="6..8", help="inclusive level range A..B (default 6..8)")
    p.set_defaults(func=cmd_sharpness)

    p = sub.add_parser("selftest", help="internal consistency battery")
    p.add_argument("--fast", action="store_true", help="skip the slower checks")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ViolationError, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
