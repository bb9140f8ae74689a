"""Command-line surface tying the transform modules together.

One request per invocation.  Exit status 0 on success, 1 on validation
errors, 2 on numerical errors (divergence, aliasing, and truncation
warnings are escalated to failures).  Each failure prints a single
machine-parsable line ``error: <category>: <message>`` on stderr.

Outputs are deterministic byte-for-byte: fixed field order, floats with
17 significant digits, no timestamps.  Every output embeds the request
that produced it under ``meta.request``.

Numeric flags accept plain decimals and pi multiples ("pi", "0.5pi",
"-2pi").  The environment variable UNITRANSFORM_QUAD_TOL overrides the
default quadrature tolerance; an explicit --quad-tol beats both.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import warnings
from typing import Any, Callable

import numpy as np

from . import expressions
from . import io_formats as io
from .eigenproblems import EigenProblemSpec, WindowedTestSequence, residual_ratio, sl_residual
from .errors import (
    AliasingError,
    ContractViolationError,
    EvaluationError,
    ParseError,
    QuadratureError,
    TruncationWarning,
    UniTransformError,
)
from .fourier_laplace import FourierLaplaceSpectrum, forward_fl, inverse_fl
from .fourier_series import complex_coefficients, gram_matrix, real_coefficients
from .fourier_transform import ContinuousSpectrum, forward_ft, inverse_ft
from .laplace import (
    LaplaceSpectrum,
    bromwich_inverse_from_samples,
    estimate_abscissa,
    forward_laplace,
    laplace_line,
)
from .numerics import DEFAULT_TOLERANCE, Grid, QuadratureSpec, SampledFunction

QUAD_TOL_ENV = "UNITRANSFORM_QUAD_TOL"

GRAM_OFFDIAG_TOL = 1e-10
RESIDUAL_DECAY_RANGE = (0.4, 0.6)
RESIDUAL_SPREAD_TOL = 1e-10
SL_RESIDUAL_TOL = 1e-12


class UsageError(UniTransformError):
    """Request cannot be validated."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; route through UsageError
    # instead so validation failures uniformly exit 1.
    def error(self, message):
        raise UsageError(message)


def parse_pi_float(text: str) -> float:
    """Decimal or pi-multiple literal: "2", "-0.25", "pi", "0.5pi"."""
    t = text.strip().lower()
    try:
        if t.endswith("pi"):
            head = t[:-2]
            if head in ("", "+"):
                return math.pi
            if head == "-":
                return -math.pi
            return float(head) * math.pi
        return float(t)
    except ValueError:
        raise UsageError(f"not a number: {text!r}") from None


def parse_complex(text: str) -> complex:
    """Complex literal with i notation: "2+0i", "1.5-2i", "3"."""
    try:
        return complex(text.strip().lower().replace("i", "j"))
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


def _grid_from_flags(name: str, lo, hi, step) -> Grid:
    missing = [
        flag
        for flag, v in ((f"--{name}-min", lo), (f"--{name}-max", hi), (f"--{name}-step", step))
        if v is None
    ]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")
    if not step > 0:
        raise UsageError(f"--{name}-step must be > 0")
    if not hi > lo:
        raise UsageError(f"--{name}-max must exceed --{name}-min")
    num = int(round((hi - lo) / step)) + 1
    return Grid.uniform(lo, hi, num)


def _interp_function(fn: SampledFunction) -> Callable:
    x = fn.grid.points
    re, im = fn.values.real, fn.values.imag
    lo, hi = float(x[0]), float(x[-1])

    def f(xs):
        arr = np.asarray(xs, dtype=float)
        if arr.min() < lo - 1e-12 or arr.max() > hi + 1e-12:
            raise ContractViolationError(
                f"input samples cover [{lo:g}, {hi:g}] but evaluation needs "
                f"[{arr.min():g}, {arr.max():g}]"
            )
        return np.interp(arr, x, re) + 1j * np.interp(arr, x, im)

    return f


def _interp_function2d(fn) -> Callable:
    xg, tg = fn.x_grid.points, fn.t_grid.points
    vals = fn.values

    def f(xs, ts):
        xs, ts = np.broadcast_arrays(np.asarray(xs, dtype=float), np.asarray(ts, dtype=float))
        if (
            xs.min() < xg[0] - 1e-12
            or xs.max() > xg[-1] + 1e-12
            or ts.min() < tg[0] - 1e-12
            or ts.max() > tg[-1] + 1e-12
        ):
            raise ContractViolationError("2-D input samples do not cover the evaluation region")
        ix = np.clip(np.searchsorted(xg, xs) - 1, 0, xg.size - 2)
        it = np.clip(np.searchsorted(tg, ts) - 1, 0, tg.size - 2)
        wx = np.clip((xs - xg[ix]) / (xg[ix + 1] - xg[ix]), 0.0, 1.0)
        wt = np.clip((ts - tg[it]) / (tg[it + 1] - tg[it]), 0.0, 1.0)
        return (
            vals[ix, it] * (1 - wx) * (1 - wt)
            + vals[ix + 1, it] * wx * (1 - wt)
            + vals[ix, it + 1] * (1 - wx) * wt
            + vals[ix + 1, it + 1] * wx * wt
        )

    return f


def _function_of_x(args) -> Callable:
    if args.expr is not None:
        ast = expressions.parse(args.expr)
        names = expressions.variables(ast)
        if "t" in names:
            raise UsageError("this command takes a function of x only; expression uses t")
        return lambda xs: expressions.evaluate_array(ast, xs)
    return _interp_function(io.load_function(args.input))


def _function_of_xt(args) -> Callable:
    if args.expr is not None:
        ast = expressions.parse(args.expr)
        return lambda xs, ts: expressions.evaluate_array(ast, xs, ts)
    return _interp_function2d(io.load_function2d(args.input))


def _require_one_source(args) -> None:
    has_expr = getattr(args, "expr", None) is not None
    has_input = getattr(args, "input", None) is not None
    if has_expr == has_input:
        raise UsageError("exactly one of --expr and --input is required")


def _quad_spec(args) -> QuadratureSpec:
    tol = args.quad_tol
    if tol is None:
        env = os.environ.get(QUAD_TOL_ENV)
        if env is not None:
            try:
                tol = float(env)
            except ValueError:
                raise UsageError(f"{QUAD_TOL_ENV} is not a number: {env!r}") from None
        else:
            tol = DEFAULT_TOLERANCE
    try:
        return QuadratureSpec(method=args.quad_method, order=args.quad_order, tolerance=tol)
    except ContractViolationError as exc:
        raise UsageError(str(exc)) from None


def _echo(args, names: list[str]) -> dict:
    request: dict[str, Any] = {"command": args.command}
    expr = getattr(args, "expr", None)
    if expr is not None:
        request["expr"] = expr
        request["expr_canonical"] = expressions.canonical(expressions.parse(expr))
    if getattr(args, "input", None) is not None:
        request["input"] = args.input
    for name in names:
        value = getattr(args, name.replace("-", "_"))
        if value is None:
            continue
        if isinstance(value, complex):
            value = [value.real, value.imag]
        request[name] = value
    request["quad_method"] = args.quad_method
    request["quad_order"] = args.quad_order
    spec = _quad_spec(args)
    request["quad_tol"] = spec.tolerance
    return {"request": request}


# ----------------------------- command handlers -----------------------------


def _cmd_series(args) -> dict:
    _require_one_source(args)
    coeffs = complex_coefficients(_function_of_x(args), args.L, args.K, _quad_spec(args))
    return io.coefficients_payload(coeffs, _echo(args, ["L", "K"]))


def _cmd_real_series(args) -> dict:
    _require_one_source(args)
    coeffs = real_coefficients(_function_of_x(args), args.L, args.K, _quad_spec(args))
    return io.real_coefficients_payload(coeffs, _echo(args, ["L", "K"]))


def _cmd_ft(args) -> dict:
    _require_one_source(args)
    grid = _grid_from_flags("lambda", args.lambda_min, args.lambda_max, args.lambda_step)
    spectrum = forward_ft(_function_of_x(args), grid, args.A, _quad_spec(args))
    return io.spectrum_payload(
        spectrum, _echo(args, ["A", "lambda-min", "lambda-max", "lambda-step"])
    )


def _require_input_only(args, command: str) -> None:
    if getattr(args, "expr", None) is not None:
        raise UsageError(f"{command} reads a stored spectrum; --expr is not accepted")
    if args.input is None:
        raise UsageError(f"{command} needs --input")


def _cmd_ift(args) -> dict:
    _require_input_only(args, "ift")
    spectrum = io.load_spectrum(args.input)
    if not isinstance(spectrum, ContinuousSpectrum):
        raise UsageError("ift needs a spectrum with convention paper-fourier")
    x_grid = _grid_from_flags("x", args.x_min, args.x_max, args.x_step)
    fn = inverse_ft(spectrum, x_grid, _quad_spec(args))
    return io.function_payload(fn, _echo(args, ["x-min", "x-max", "x-step"]))


def _cmd_lt(args) -> dict:
    _require_one_source(args)
    f = _function_of_x(args)
    if args.s is not None:
        if args.sigma is not None or args.tau_min is not None:
            raise UsageError("give either --s or a --sigma/--tau-* line, not both")
        result = forward_laplace(f, args.s, args.X, _quad_spec(args))
        meta = _echo(args, ["s", "X"])
        meta["tail_estimate"] = result.tail_estimate
        return io.value_payload(result.value, meta)
    if args.sigma is None:
        raise UsageError("lt needs --s, or --sigma with --tau-min/--tau-max/--tau-step")
    tau_grid = _grid_from_flags("tau", args.tau_min, args.tau_max, args.tau_step)
    spectrum = laplace_line(f, args.sigma, tau_grid, args.X, _quad_spec(args))
    return io.spectrum_payload(
        spectrum, _echo(args, ["sigma", "X", "tau-min", "tau-max", "tau-step"])
    )


def _cmd_ilt(args) -> dict:
    _require_input_only(args, "ilt")
    spectrum = io.load_spectrum(args.input)
    if not isinstance(spectrum, LaplaceSpectrum):
        raise UsageError("ilt needs a spectrum with convention laplace-line")
    value = bromwich_inverse_from_samples(spectrum, args.t)
    meta = _echo(args, ["t"])
    meta["imag_residual"] = abs(value.imag)
    return io.value_payload(value, meta)


def _cmd_flt(args) -> dict:
    _require_one_source(args)
    f = _function_of_xt(args)
    lam_grid = _grid_from_flags("lambda", args.lambda_min, args.lambda_max, args.lambda_step)
    tau_grid = _grid_from_flags("tau", args.tau_min, args.tau_max, args.tau_step)
    spectrum = forward_fl(
        f, lam_grid, args.sigma, tau_grid, (args.A, args.X), _quad_spec(args)
    )
    return io.spectrum_payload(
        spectrum,
        _echo(
            args,
            [
                "sigma", "A", "X",
                "lambda-min", "lambda-max", "lambda-step",
                "tau-min", "tau-max", "tau-step",
            ],
        ),
    )


def _cmd_iflt(args) -> dict:
    _require_input_only(args, "iflt")
    spectrum = io.load_spectrum(args.input)
    if not isinstance(spectrum, FourierLaplaceSpectrum):
        raise UsageError("iflt needs a spectrum with convention fourier-laplace")
    value = inverse_fl(spectrum, args.x, args.t, _quad_spec(args))
    meta = _echo(args, ["x", "t"])
    meta["imag_residual"] = abs(value.imag)
    return io.value_payload(value, meta)


def _cmd_verify_orthogonality(args) -> dict:
    gram = gram_matrix(args.L, args.K, _quad_spec(args))
    diag = np.diagonal(gram)
    off = gram - np.diag(diag)
    diag_err = float(np.max(np.abs(diag - 2.0 * args.L)))
    off_max = float(np.max(np.abs(off))) if gram.size > 1 else 0.0
    passed = off_max <= GRAM_OFFDIAG_TOL and diag_err <= GRAM_OFFDIAG_TOL
    fields = {
        "L": args.L,
        "K": args.K,
        "expected_diagonal": 2.0 * args.L,
        "diagonal_max_error": diag_err,
        "offdiagonal_max": off_max,
        "tolerance": GRAM_OFFDIAG_TOL,
        "passed": passed,
    }
    return io.report_payload("orthogonality", fields, _echo(args, ["L", "K"]))


def _cmd_verify_residual(args) -> dict:
    lams = args.lam if args.lam else [0.0, 1.0, 5.0]
    ns = args.n if args.n else [4, 8, 16]
    if any(n < 1 for n in ns):
        raise UsageError("--n entries must be >= 1")
    problem = EigenProblemSpec.whole_line()
    spec = _quad_spec(args)
    ratios = {
        lam: [residual_ratio(problem, lam, WindowedTestSequence(lam=lam, n=n), spec) for n in ns]
        for lam in lams
    }
    decay = []
    for lam in lams:
        row = ratios[lam]
        decay.extend(row[i + 1] / row[i] for i in range(len(row) - 1))
    spread = 0.0
    for i, n in enumerate(ns):
        values = [ratios[lam][i] for lam in lams]
        spread = max(spread, max(values) - min(values))
    lo, hi = RESIDUAL_DECAY_RANGE
    passed = all(lo <= d <= hi for d in decay) and spread <= RESIDUAL_SPREAD_TOL
    fields = {
        "lambdas": [float(v) for v in lams],
        "widths": [int(n) for n in ns],
        "ratios": [[ratios[lam][i] for i in range(len(ns))] for lam in lams],
        "decay_factors": decay,
        "lambda_spread": spread,
        "decay_range": [lo, hi],
        "spread_tolerance": RESIDUAL_SPREAD_TOL,
        "passed": passed,
    }
    return io.report_payload("residual", fields, _echo(args, []))


def _cmd_verify_sl(args) -> dict:
    grid = Grid.uniform(-args.L, args.L, 201)
    residuals = [sl_residual(args.L, k, grid) for k in range(-args.k_max, args.k_max + 1)]
    worst = max(residuals)
    passed = worst <= SL_RESIDUAL_TOL
    fields = {
        "L": args.L,
        "k_max": args.k_max,
        "max_residual": worst,
        "tolerance": SL_RESIDUAL_TOL,
        "boundary_conditions_exact": True,
        "passed": passed,
    }
    return io.report_payload("sturm-liouville", fields, _echo(args, ["L", "k-max"]))


def _cmd_estimate_abscissa(args) -> dict:
    _require_one_source(args)
    if args.input is not None:
        samples = io.load_function(args.input)
    else:
        grid = _grid_from_flags("x", args.x_min, args.x_max, args.x_step)
        ast = expressions.parse(args.expr)
        if "t" in expressions.variables(ast):
            raise UsageError("estimate-abscissa takes a function of x only")
        samples = SampledFunction(grid, expressions.evaluate_array(ast, grid.points))
    estimate = estimate_abscissa(samples)
    fields = {
        "sigma_hat": estimate.sigma_hat,
        "M_hat": estimate.M_hat,
        "fit_residual": estimate.fit_residual,
    }
    return io.report_payload(
        "abscissa", fields, _echo(args, ["x-min", "x-max", "x-step"])
    )


def _cmd_roundtrip(args) -> dict:
    if args.expr is None:
        raise UsageError("roundtrip needs --expr")
    f = _function_of_x(args)
    spec = _quad_spec(args)
    lam_grid = _grid_from_flags("lambda", args.lambda_min, args.lambda_max, args.lambda_step)
    x_grid = _grid_from_flags("x", args.x_min, args.x_max, args.x_step)
    spectrum = forward_ft(f, lam_grid, args.A, spec)
    recovered = inverse_ft(spectrum, x_grid, spec)
    reference = np.asarray(f(x_grid.points), dtype=complex)
    sup_error = float(np.max(np.abs(recovered.values - reference)))
    fields = {
        "sup_error": sup_error,
        "x_grid": [float(v) for v in x_grid.points],
        "values": [[v.real, v.imag] for v in recovered.values],
        "reference": [[v.real, v.imag] for v in reference],
    }
    return io.report_payload(
        "roundtrip",
        fields,
        _echo(
            args,
            ["A", "lambda-min", "lambda-max", "lambda-step", "x-min", "x-max", "x-step"],
        ),
    )


_HANDLERS = {
    "series": _cmd_series,
    "real-series": _cmd_real_series,
    "ft": _cmd_ft,
    "ift": _cmd_ift,
    "lt": _cmd_lt,
    "ilt": _cmd_ilt,
    "flt": _cmd_flt,
    "iflt": _cmd_iflt,
    "verify-orthogonality": _cmd_verify_orthogonality,
    "verify-residual": _cmd_verify_residual,
    "verify-sl": _cmd_verify_sl,
    "estimate-abscissa": _cmd_estimate_abscissa,
    "roundtrip": _cmd_roundtrip,
}


# ----------------------------- argument wiring -----------------------------


def _add_common(sub: argparse.ArgumentParser, source: bool = True) -> None:
    if source:
        sub.add_argument("--expr", help="expression in x (and t where supported)")
        sub.add_argument("--input", help="input file path")
    sub.add_argument("--output", help="output file path (stdout when omitted)")
    sub.add_argument("--format", choices=("json", "csv"), default="json")
    sub.add_argument("--quad-method", choices=("trapezoid", "gauss-legendre", "adaptive"),
                     default="adaptive")
    sub.add_argument("--quad-order", type=int, default=10)
    sub.add_argument("--quad-tol", type=parse_pi_float, default=None,
                     help=f"absolute quadrature tolerance (default {DEFAULT_TOLERANCE}, "
                          f"or ${QUAD_TOL_ENV})")


def _add_grid(sub: argparse.ArgumentParser, name: str) -> None:
    sub.add_argument(f"--{name}-min", type=parse_pi_float)
    sub.add_argument(f"--{name}-max", type=parse_pi_float)
    sub.add_argument(f"--{name}-step", type=parse_pi_float)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="unitransform",
        description="Integral-transform toolkit: Fourier series, Fourier, Laplace "
        "and Fourier-Laplace transforms with verification subcommands.",
        epilog=(
            "Expression grammar: numbers, pi, e, variables x and t, unary "
            "functions exp/sin/cos/sqrt/abs/log with mandatory parentheses, "
            "operators + - * / ^ with ^ constant-exponent only and tighter "
            "than unary minus.  Numeric flags accept pi multiples like 0.5pi. "
            "CSV columns: function x,re,im; fourier spectrum lambda,re,im; "
            "laplace line tau,re,im; coefficients k,re,im (complex) or k,a,b (real)."
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub = subs.add_parser("series", help="complex Fourier coefficients on (-L, L)")
    _add_common(sub)
    sub.add_argument("--L", type=parse_pi_float, required=True)
    sub.add_argument("--K", type=int, required=True)

    sub = subs.add_parser("real-series", help="cosine/sine Fourier coefficients")
    _add_common(sub)
    sub.add_argument("--L", type=parse_pi_float, required=True)
    sub.add_argument("--K", type=int, required=True)

    sub = subs.add_parser("ft", help="forward Fourier transform on a frequency grid")
    _add_common(sub)
    sub.add_argument("--A", type=parse_pi_float, required=True,
                     help="x-integration truncation [-A, A]")
    _add_grid(sub, "lambda")

    sub = subs.add_parser("ift", help="inverse Fourier transform of a stored spectrum")
    _add_common(sub)
    _add_grid(sub, "x")

    sub = subs.add_parser("lt", help="Laplace transform at a point s or along a line")
    _add_common(sub)
    sub.add_argument("--s", type=parse_complex, help="single evaluation point, e.g. 2+0i")
    sub.add_argument("--sigma", type=parse_pi_float, help="line abscissa for a spectrum")
    _add_grid(sub, "tau")
    sub.add_argument("--X", type=parse_pi_float, required=True,
                     help="half-line truncation point")

    sub = subs.add_parser("ilt", help="inverse Laplace transform of a stored line spectrum")
    _add_common(sub)
    sub.add_argument("--t", type=parse_pi_float, required=True)

    sub = subs.add_parser("flt", help="forward Fourier-Laplace transform of f(x, t)")
    _add_common(sub)
    sub.add_argument("--sigma", type=parse_pi_float, required=True)
    sub.add_argument("--A", type=parse_pi_float, required=True)
    sub.add_argument("--X", type=parse_pi_float, required=True)
    _add_grid(sub, "lambda")
    _add_grid(sub, "tau")

    sub = subs.add_parser("iflt", help="inverse Fourier-Laplace transform at (x, t)")
    _add_common(sub)
    sub.add_argument("--x", type=parse_pi_float, required=True)
    sub.add_argument("--t", type=parse_pi_float, required=True)

    sub = subs.add_parser("verify-orthogonality", help="Gram matrix report")
    _add_common(sub, source=False)
    sub.add_argument("--L", type=parse_pi_float, required=True)
    sub.add_argument("--K", type=int, required=True)

    sub = subs.add_parser("verify-residual", help="continuum residual decay report")
    _add_common(sub, source=False)
    sub.add_argument("--lam", type=parse_pi_float, action="append",
                     help="eigenvalue to test (repeatable; default 0 1 5)")
    sub.add_argument("--n", type=int, action="append",
                     help="window width index (repeatable; default 4 8 16)")

    sub = subs.add_parser("verify-sl", help="second-order reformulation residual report")
    _add_common(sub, source=False)
    sub.add_argument("--L", type=parse_pi_float, required=True)
    sub.add_argument("--k-max", type=int, required=True)

    sub = subs.add_parser("estimate-abscissa", help="exponential growth-rate fit")
    _add_common(sub)
    _add_grid(sub, "x")

    sub = subs.add_parser("roundtrip", help="forward+inverse Fourier transform report")
    _add_common(sub)
    sub.add_argument("--A", type=parse_pi_float, required=True)
    _add_grid(sub, "lambda")
    _add_grid(sub, "x")

    return parser


def run(args: argparse.Namespace) -> int:
    """Execute a validated request; returns the process exit status."""
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            payload = _HANDLERS[args.command](args)
        for w in caught:
            if issubclass(w.category, TruncationWarning):
                raise QuadratureError(str(w.message))
        passed = bool(payload.get("passed", True))
        data = io.to_csv_bytes(payload) if args.format == "csv" else io.to_json_bytes(payload)
        if args.output:
            with open(args.output, "wb") as fh:
                fh.write(data)
        else:
            sys.stdout.buffer.write(data)
            sys.stdout.buffer.flush()
        if not passed:
            _fail("numerical", "verification check failed; see the report output")
            return 2
        return 0
    except (UsageError, ParseError, ContractViolationError) as exc:
        _fail("validation", str(exc))
        return 1
    except (QuadratureError, AliasingError, EvaluationError) as exc:
        _fail("numerical", str(exc))
        return 2


def _fail(category: str, message: str) -> None:
    line = " ".join(str(message).split())
    print(f"error: {category}: {line}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        _fail("validation", str(exc))
        return 1
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
