"""Command-line front end: single-value evaluation, error sweeps, the
published-table reproductions, calibration, cost reports, and LUT export.

Steps, thresholds, and power-of-two targets are written as exact fractions
(``1/64``) or powers (``2^-6``); decimal step strings are rejected so no
parameter is silently rounded. Exit codes: 0 success, 1 usage error,
2 calibration or reproduction failure.
"""

from __future__ import annotations

import argparse
import io
import re
import sys
from dataclasses import replace
from typing import Sequence

from . import analysis, costmodel, lutio
from .analysis import (CALIBRATION_CSV_HEADER, ERROR_CSV_HEADER,
                       CalibrationError, calibration_csv_row, canonical_method,
                       error_csv_row, format_table1, make_kernel,
                       reproduce_table1)
from .fixedpoint import QFormat, quantize
from .rational import group_vf
from .reference import DomainSpec, ideal_output

_POW_RE = re.compile(r"^2\^(-?\d+)$")
_FRAC_RE = re.compile(r"^(\d+)/(\d+)$")

USAGE_ERROR = 1
CHECK_FAILURE = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; the contract reserves 2 for
    # calibration/reproduction failures.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def parse_power_of_two(text: str) -> float:
    """Exact power-of-two literal: '1/64' or '2^-6' (never decimals)."""
    text = text.strip()
    m = _FRAC_RE.match(text)
    if m:
        num, den = int(m.group(1)), int(m.group(2))
        if num != 1 or den & (den - 1) or den == 0:
            raise ValueError(f"{text!r} is not a power-of-two fraction 1/2^s")
        return 1.0 / den
    m = _POW_RE.match(text)
    if m:
        return 2.0 ** int(m.group(1))
    raise ValueError(f"expected '1/<power of two>' or '2^-<s>', got {text!r}")


def parse_target(text: str) -> float:
    """Error target: power-of-two literal or a plain decimal real."""
    try:
        return parse_power_of_two(text)
    except ValueError:
        return float(text)


def _add_kernel_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", required=True,
                   help="pwl | taylor3 | taylor4 | catmullrom | velocity | "
                        "lambert (or config letters A, B1, B2, C, D, E)")
    p.add_argument("--step", help="knot spacing, e.g. 1/64 or 2^-6")
    p.add_argument("--threshold", help="velocity-factor threshold, e.g. 1/128")
    p.add_argument("--depth", type=int, help="continued-fraction divisions")
    p.add_argument("--in-fmt", default="S3.12", help="input format (default S3.12)")
    p.add_argument("--out-fmt", default="S.15", help="output format (default S.15)")
    p.add_argument("--range", type=float, default=6.0, dest="range_limit",
                   help="domain half-width (default 6)")
    p.add_argument("--centered", action="store_true",
                   help="midpoint-centered lookup for the Taylor methods")


def _kernel_param(args: argparse.Namespace, method: str):
    if method == "lambert":
        if args.depth is None:
            raise ValueError("--depth is required for the lambert method")
        return args.depth
    if method == "velocity":
        if args.threshold is None:
            raise ValueError("--threshold is required for the velocity method")
        return parse_power_of_two(args.threshold)
    if args.step is None:
        raise ValueError(f"--step is required for the {method} method")
    return parse_power_of_two(args.step)


def _build_kernel(args: argparse.Namespace):
    method = canonical_method(args.method)
    param = _kernel_param(args, method)
    dom = DomainSpec.for_format(QFormat.parse(args.out_fmt), args.range_limit)
    kernel = make_kernel(method, param, args.in_fmt, args.out_fmt, dom,
                         args.centered)
    return method, param, kernel


def _write_output(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _cmd_eval(args: argparse.Namespace) -> int:
    method, _, kernel = _build_kernel(args)
    xq = quantize(float(args.x), kernel.in_fmt)
    out = kernel.eval(xq)
    ref = ideal_output(xq.value, kernel.dom)
    err = abs(out.value - ref)
    print(f"method={method} input={xq.value!r} input_raw={xq.raw} "
          f"output_raw={out.raw} output={out.value!r} reference={ref!r} "
          f"abs_err={err!r}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    method = canonical_method(args.method)
    if method == "lambert":
        params = [int(p) for p in args.params.split(",")]
    else:
        params = [parse_power_of_two(p) for p in args.params.split(",")]
    dom = DomainSpec.for_format(QFormat.parse(args.out_fmt), args.range_limit)
    points = analysis.sweep_parameter(method, params, args.in_fmt,
                                      args.out_fmt, dom, args.centered)
    lines = [ERROR_CSV_HEADER]
    for pt in points:
        lines.append(error_csv_row(method, pt.param,
                                   QFormat.parse(args.in_fmt),
                                   QFormat.parse(args.out_fmt),
                                   args.range_limit, pt.report))
    _write_output("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_table1(args: argparse.Namespace) -> int:
    report = reproduce_table1()
    if args.csv:
        lines = [ERROR_CSV_HEADER]
        for row in report.rows:
            lines.append(error_csv_row(row.method, row.param,
                                       analysis.TABLE1_IN_FMT,
                                       analysis.TABLE1_OUT_FMT, 6.0,
                                       row.report))
        _write_output("\n".join(lines) + "\n", args.out)
    else:
        _write_output(format_table1(report) + "\n", args.out)
    ok = all(r.max_err_within_25pct and r.rmse_within_25pct
             for r in report.rows)
    return 0 if ok else CHECK_FAILURE


def _cmd_calibrate(args: argparse.Namespace) -> int:
    method = canonical_method(args.method)
    target = parse_target(args.target)
    try:
        res = analysis.calibrate(method, args.in_fmt, args.out_fmt,
                                 args.range_limit, target, args.centered)
    except CalibrationError as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        return CHECK_FAILURE
    _write_output(CALIBRATION_CSV_HEADER + "\n" + calibration_csv_row(res)
                  + "\n", args.out)
    return 0


def _cmd_cost(args: argparse.Namespace) -> int:
    method, _, kernel = _build_kernel(args)
    if args.grouped:
        if method != "velocity":
            raise ValueError("--grouped applies to the velocity method only")
        kernel = group_vf(kernel)
    if args.weights_stored:
        if method != "catmullrom":
            raise ValueError("--weights-stored applies to catmullrom only")
        kernel = replace(kernel, weights_stored=True)
    rep = costmodel.cost_of(method, kernel)
    out = (costmodel.COST_CSV_HEADER + "\n"
           + costmodel.cost_csv_row(method, kernel, rep) + "\n")
    if args.notes:
        out += f"# {rep.notes}\n"
    _write_output(out, args.out)
    return 0


def _cmd_gen_lut(args: argparse.Namespace) -> int:
    method, _, kernel = _build_kernel(args)
    if method == "lambert":
        raise ValueError("the lambert method stores no lookup table")
    buf = io.StringIO()
    lutio.export_kernel(kernel, args.format, buf)
    _write_output(buf.getvalue(), args.out)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="fxtanh",
                     description="Fixed-point tanh approximation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[], help="evaluate one input")
    _add_kernel_flags(p)
    p.add_argument("--x", required=True, help="input value (decimal)")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("sweep", help="error sweep over a parameter list")
    _add_kernel_flags(p)
    p.add_argument("--params", required=True,
                   help="comma list, e.g. 1/8,1/16,1/32 (depths for lambert)")
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("table1",
                       help="reproduce the published six-config comparison")
    p.add_argument("--csv", action="store_true", help="emit raw CSV rows")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(fn=_cmd_table1)

    p = sub.add_parser("calibrate",
                       help="smallest parameter meeting an error target")
    _add_kernel_flags(p)
    p.add_argument("--target", required=True,
                   help="max-error target, e.g. 2^-15 or 3.05e-5")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(fn=_cmd_calibrate)

    p = sub.add_parser("cost", help="hardware resource tally")
    _add_kernel_flags(p)
    p.add_argument("--grouped", action="store_true",
                   help="two-bit grouped lookup (velocity)")
    p.add_argument("--weights-stored", action="store_true",
                   help="basis-weight LUT instead of cubic logic (catmullrom)")
    p.add_argument("--notes", action="store_true", help="append model notes")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(fn=_cmd_cost)

    p = sub.add_parser("gen-lut", help="export a kernel's lookup table")
    _add_kernel_flags(p)
    p.add_argument("--format", required=True,
                   choices=("hex", "cheader", "csv"))
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(fn=_cmd_gen_lut)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"fxtanh: error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
