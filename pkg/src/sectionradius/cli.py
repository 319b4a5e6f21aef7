"""Command-line interface: ``section-radius radius|table|bounds|verify|eval``.

Every command prints one JSON record on stdout (``table`` can emit CSV
instead). Exit codes: 0 success, 1 usage, 2 ambiguous sign, 3 no sign
change, 4 verification violations.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from typing import Any

import numpy as np

from . import coefficients, distortion, solver, verification
from ._types import AlphaOrder, ViolationReport
from .solver import AmbiguousSign, BoundFamily, GapQuery, NoSignChange

EXIT_OK, EXIT_USAGE, EXIT_AMBIGUOUS, EXIT_NO_SIGN_CHANGE, EXIT_VIOLATIONS = 0, 1, 2, 3, 4

DEFAULT_RHOS = "0.25,0.5,0.75,0.9"
DEFAULT_ALPHAS = "-0.5,0,0.25,0.5,0.75"
COEFF_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(message)


# ---------------------------------------------------------------- output


def _encode(obj: Any) -> str:
    """Deterministic JSON: sorted keys, floats with 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isfinite(x):
            return format(x, ".17g")
        return json.dumps("inf" if x > 0 else "-inf" if x < 0 else "nan")
    if isinstance(obj, complex):
        return _encode([obj.real, obj.imag])
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def output_record(command: str, inputs: dict, outputs: dict, anchor: str,
                  tolerance: float) -> str:
    return _encode({
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "provenance": {"paper_anchor": anchor, "tolerance": tolerance},
    })


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _need(args, *names: str) -> None:
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} requires {', '.join(missing)}")


def _query(args) -> GapQuery:
    _need(args, "n", "m")
    if args.family == "falpha":
        _need(args, "alpha")
        return GapQuery.falpha(args.alpha, args.n, args.m)
    if args.alpha is not None:
        raise UsageError("--alpha is only valid with --family falpha")
    return GapQuery(solver.Family(args.family), args.n, args.m)


# -------------------------------------------------------------- commands


def cmd_radius(args) -> tuple[str, int]:
    q = _query(args)
    sol = solver.find_radius(q, width=args.tol)
    inputs = {"family": args.family, "n": args.n, "m": args.m, "alpha": args.alpha, "tol": args.tol}
    return output_record("radius", inputs, sol.as_dict(),
                         "radius of univalence as the root of the gap function", args.tol), EXIT_OK


def cmd_table(args) -> tuple[str, int]:
    rhos, alphas = _floats(args.rhos), _floats(args.alphas)
    for rho in rhos:
        if not (0 < rho <= 0.99):
            raise UsageError(f"rho must lie in (0, 0.99], got {rho}")
    for a in alphas:
        if not (-0.5 <= a < 1):
            raise UsageError(f"alpha must lie in [-1/2, 1), got {a}")
        if a < 0 and a != -0.5:
            raise UsageError("negative alpha is only supported at -0.5 (convex family)")
    grid = solver.min_sections_table(rhos, alphas)
    if args.format == "csv":
        buf = io.StringIO()
        buf.write("rho,alpha,min_n\n")
        for rho, row in zip(rhos, grid):
            for a, n in zip(alphas, row):
                buf.write(f"{rho:g},{a:g},{n}\n")
        return buf.getvalue().rstrip("\n"), EXIT_OK
    rows = [{"rho": rho, "alpha": a, "min_n": n}
            for rho, row in zip(rhos, grid) for a, n in zip(alphas, row)]
    inputs = {"rhos": rhos, "alphas": alphas}
    return output_record("table", inputs, {"grid": grid, "rows": rows},
                         "minimal section order for univalence in |z| < rho", 0.0), EXIT_OK


def cmd_bounds(args) -> tuple[str, int]:
    family = BoundFamily.from_name(args.family)
    if args.n < family.min_n:
        var = "l = min(n, m)" if family in (BoundFamily.HALF_ORDER_LOG, BoundFamily.CONVEX_THM_B) else "n"
        raise UsageError(f"{family.cli_name} bound is valid for {var} >= {family.min_n}")
    bound = solver.asymptotic_bound(family, args.n)
    outputs: dict[str, Any] = {"bound": bound}
    if args.check:
        if family is not BoundFamily.HALF_ORDER_LOG:
            raise UsageError("--check is only available for --family halforder")
        sol = solver.find_radius(GapQuery.falpha(0.5, args.n, args.n))
        outputs.update(root=sol.root, margin=sol.bracket_low - bound)
    return output_record("bounds", {"family": family.cli_name, "n": args.n, "check": args.check},
                         outputs, f"closed-form lower bound ({family.cli_name})", 0.0), EXIT_OK


def _grid(args) -> verification.GridSpec:
    if args.grid:
        return verification.GridSpec.parse(args.grid, seed=args.seed)
    return verification.GridSpec(seed=args.seed)


def _section_radius(args) -> tuple[Any, float]:
    _need(args, "alpha", "n", "m")
    p = coefficients.build_section(args.alpha, args.n, args.m, args.theta)
    if args.r == "auto":
        root = solver.find_radius(GapQuery.falpha(args.alpha, args.n, args.m)).root
        return p, root * 0.999
    try:
        return p, float(args.r)
    except (TypeError, ValueError):
        raise UsageError(f"--r must be a number or 'auto', got {args.r!r}") from None


def cmd_verify(args) -> tuple[str, int]:
    what = args.oracle
    inputs = {k: v for k, v in vars(args).items() if k not in ("command", "handler", "oracle")}
    inputs["oracle"] = what
    tolerance = 0.0
    extra: dict[str, Any] = {}
    if what == "distortion":
        _need(args, "alpha")
        r = 0.5 if args.r in (None, "auto") else float(args.r)
        report = verification.verify_distortion(args.alpha, r, args.pairs, args.seed)
        tolerance = verification.DISTORTION_SLACK
        anchor = "two-point distortion lower bound"
    elif what == "coeffs":
        _need(args, "alpha")
        a, b = coefficients.extremal_taylor(args.alpha, args.count,
                                            samples=max(coefficients.DEFAULT_SAMPLES, 4 * args.count))
        dev = [abs(abs(a[k - 1]) - coefficients.bound_analytic(k, args.alpha))
               for k in range(1, args.count + 1)]
        dev += [abs(abs(b[k - 1]) - coefficients.bound_coanalytic(k, args.alpha))
                for k in range(2, args.count + 1)]
        margins = [COEFF_TOL - d for d in dev]
        report = ViolationReport(samples=len(dev), violations=sum(m < 0 for m in margins),
                                 worst_margin=min(margins))
        extra["max_deviation"] = max(dev)
        tolerance = COEFF_TOL
        anchor = "sharp coefficient bounds attained by the extremal function"
    elif what in ("injectivity", "sense"):
        p, r = _section_radius(args)
        fn = verification.injectivity_scan if what == "injectivity" else verification.verify_sense_preserving
        report = fn(p, r, _grid(args))
        extra["r"] = r
        tolerance = verification.COLLISION_EPS if what == "injectivity" else 0.0
        anchor = "univalence of sections" if what == "injectivity" else "sense-preserving sections"
    elif what == "starkov":
        p, r = _section_radius(args)
        grid = _grid(args)
        value, (z_min, t_min) = verification.starkov_min(p, r, grid, variant=args.variant)
        bad = value <= verification.COLLISION_EPS
        report = ViolationReport(
            samples=grid.radial_count * grid.angular_count * grid.t_count,
            violations=int(bad), worst_margin=value - verification.COLLISION_EPS,
            witnesses=[(str(z_min), t_min)] if bad else [],
        )
        extra.update(r=r, min_modulus=value, argmin_z=z_min, argmin_t=t_min)
        tolerance = verification.COLLISION_EPS
        anchor = "Starkov univalence functional of the rescaled section"
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown oracle {what!r}")
    outputs = {**report.as_dict(), **extra}
    code = EXIT_OK if report.ok else EXIT_VIOLATIONS
    return output_record("verify", inputs, outputs, anchor, tolerance), code


def cmd_eval(args) -> tuple[str, int]:
    what = args.what
    outputs: dict[str, Any] = {}
    if what in ("L", "A"):
        _need(args, "alpha", "r")
        fn = distortion.growth_lower_L if what == "L" else distortion.two_point_bound_A
        outputs["value"] = fn(args.r, args.alpha)
        anchor = "two-point distortion"
    elif what in ("psi", "mu", "psictc"):
        _need(args, "r", "n", "m")
        if what == "psi":
            _need(args, "alpha")
            q = GapQuery.falpha(args.alpha, args.n, args.m)
        else:
            q = GapQuery.mu(args.n, args.m) if what == "mu" else GapQuery.ctc(args.n, args.m)
        value, err = solver.gap_eval(q, args.r)
        outputs.update(value=value, tail_error=err)
        anchor = "gap function"
    elif what == "Ak":
        _need(args, "alpha", "k")
        outputs["value"] = coefficients.bound_analytic(args.k, args.alpha)
        anchor = "sharp analytic coefficient bound"
    else:
        _need(args, "x", "n")
        outputs["value"] = solver.t_function(args.x, args.n)
        anchor = "auxiliary function t(x, n) of the half-order bound"
    inputs = {k: getattr(args, k) for k in ("what", "alpha", "r", "n", "m", "k", "x")
              if getattr(args, k) is not None}
    return output_record("eval", inputs, outputs, anchor, 1e-12), EXIT_OK


# ---------------------------------------------------------------- parser


def _alpha(text: str) -> float:
    try:
        return AlphaOrder(float(text)).value
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="section-radius",
                     description="Radius of univalence of sections of harmonic mappings in F(alpha).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("radius", help="root of the gap function")
    p.add_argument("--family", choices=["falpha", "mu", "ctc"], required=True)
    p.add_argument("--alpha", type=_alpha)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--tol", type=float, default=solver.BRACKET_WIDTH)
    p.set_defaults(handler=cmd_radius)

    p = sub.add_parser("table", help="minimal section orders")
    p.add_argument("--rhos", default=DEFAULT_RHOS)
    p.add_argument("--alphas", default=DEFAULT_ALPHAS)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("bounds", help="closed-form lower bounds")
    p.add_argument("--family", choices=[b.cli_name for b in BoundFamily], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--check", action="store_true")
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("verify", help="numerical oracles")
    p.add_argument("oracle", choices=["distortion", "coeffs", "injectivity", "starkov", "sense"])
    p.add_argument("--alpha", type=_alpha)
    p.add_argument("--r")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--pairs", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", help="RxAxT, e.g. 32x128x32")
    p.add_argument("--count", type=int, default=30)
    p.add_argument("--variant", choices=["harmonic", "analytic"], default="harmonic")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("eval", help="evaluate a single quantity")
    p.add_argument("--what", choices=["L", "A", "psi", "mu", "psictc", "Ak", "t"], required=True)
    p.add_argument("--alpha", type=_alpha)
    p.add_argument("--r", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--x", type=float)
    p.set_defaults(handler=cmd_eval)
    return parser


def run(argv: list[str] | None = None) -> tuple[str, str, int]:
    """Run the CLI; returns (stdout text, stderr text, exit code)."""
    try:
        args = build_parser().parse_args(argv)
        out, code = args.handler(args)
        return out + "\n", "", code
    except UsageError as exc:
        return "", f"section-radius: error: {exc}\n", EXIT_USAGE
    except AmbiguousSign as exc:
        return "", f"section-radius: ambiguous sign: {exc}\n", EXIT_AMBIGUOUS
    except NoSignChange as exc:
        return "", f"section-radius: no sign change: {exc}\n", EXIT_NO_SIGN_CHANGE
    except ValueError as exc:
        return "", f"section-radius: error: {exc}\n", EXIT_USAGE


def main(argv: list[str] | None = None) -> int:
    out, err, code = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
