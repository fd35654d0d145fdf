"""Exhaustive error sweeps, parameter sweeps, and reproduction of the
published configuration study.

Sweeps visit every representable fixed-point input in the domain, compare
the dequantized kernel output against the unquantized ideal output at the
exact input value, and aggregate in fixed input order with exact
accumulation (math.fsum), so repeated runs are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Union

from .fixedpoint import QFormat
from .poly import CrTable, PwlTable, TaylorTable
from .rational import LambertConfig, VfTable
from .reference import DomainSpec

Kernel = Union[PwlTable, TaylorTable, CrTable, VfTable, LambertConfig]
Param = Union[float, int]

METHODS = ("pwl", "taylor3", "taylor4", "catmullrom", "velocity", "lambert")

_ALIASES = {
    "a": "pwl",
    "b1": "taylor3",
    "b2": "taylor4",
    "c": "catmullrom",
    "cr": "catmullrom",
    "d": "velocity",
    "vf": "velocity",
    "e": "lambert",
}

ERROR_CSV_HEADER = ("method,param,in_fmt,out_fmt,range,"
                    "max_abs_err,argmax_input,mse,rmse,n_points")


def canonical_method(method: str) -> str:
    m = method.strip().lower()
    m = _ALIASES.get(m, m)
    if m not in METHODS:
        raise ValueError(f"unknown method {method!r} (expected one of {METHODS})")
    return m


def _as_fmt(fmt: Union[QFormat, str]) -> QFormat:
    return fmt if isinstance(fmt, QFormat) else QFormat.parse(fmt)


def make_kernel(method: str, param: Param, in_fmt: Union[QFormat, str],
                out_fmt: Union[QFormat, str], dom: DomainSpec | None = None,
                centered: bool = False) -> Kernel:
    """Build a kernel for a method id and its single tuning parameter
    (step, threshold, or continued-fraction depth)."""
    method = canonical_method(method)
    in_fmt = _as_fmt(in_fmt)
    out_fmt = _as_fmt(out_fmt)
    if dom is None:
        dom = DomainSpec.for_format(out_fmt)
    if method == "pwl":
        return PwlTable.build(float(param), in_fmt, out_fmt, dom)
    if method == "taylor3":
        return TaylorTable.build(float(param), 3, in_fmt, out_fmt, dom, centered)
    if method == "taylor4":
        return TaylorTable.build(float(param), 4, in_fmt, out_fmt, dom, centered)
    if method == "catmullrom":
        return CrTable.build(float(param), in_fmt, out_fmt, dom)
    if method == "velocity":
        return VfTable.build(float(param), in_fmt, out_fmt, dom)
    return LambertConfig.build(int(param), in_fmt, out_fmt, dom)


def method_of(kernel: Kernel) -> str:
    if isinstance(kernel, PwlTable):
        return "pwl"
    if isinstance(kernel, TaylorTable):
        return f"taylor{kernel.terms}"
    if isinstance(kernel, CrTable):
        return "catmullrom"
    if isinstance(kernel, VfTable):
        return "velocity"
    return "lambert"


def param_of(kernel: Kernel) -> Param:
    if isinstance(kernel, LambertConfig):
        return kernel.depth
    if isinstance(kernel, VfTable):
        return kernel.threshold
    return kernel.step


@dataclass(frozen=True)
class ErrorReport:
    """Aggregate error of one kernel over an exhaustive input sweep."""

    max_abs_err: float
    argmax_input: float
    mse: float
    rmse: float
    n_points: int
    clamp_region_included: bool = True


@dataclass(frozen=True)
class SweepPoint:
    param: Param
    report: ErrorReport


@dataclass(frozen=True)
class CalibrationResult:
    method: str
    in_fmt: QFormat
    out_fmt: QFormat
    range_limit: float
    param: Param
    achieved_max_err: float
    target_ulp: float


class CalibrationError(Exception):
    """No ladder parameter met the target; carries the best attempt."""

    def __init__(self, method: str, target: float, best_param: Param,
                 best_err: float):
        self.method = method
        self.target = target
        self.best_param = best_param
        self.best_err = best_err
        super().__init__(
            f"{method}: no ladder parameter reaches max error {target:g} "
            f"(best {best_err:g} at {format_param(best_param)})")


def sweep_error(kernel: Kernel, include_clamp_region: bool = True,
                sweep_limit: float | None = None) -> ErrorReport:
    """Exhaustive error sweep over every representable input in
    [-limit, limit].

    ``include_clamp_region == False`` restricts the sweep to inputs whose
    ideal output is strictly below the clamp (the processing region).
    ``sweep_limit`` overrides the swept half-range without touching the
    kernel's own domain.
    """
    in_fmt = kernel.in_fmt
    dom = kernel.dom
    limit = dom.limit if sweep_limit is None else sweep_limit
    hi = min(int(math.floor(limit * in_fmt.scale)), in_fmt.max_raw)
    if not include_clamp_region:
        hi = min(hi, int(math.floor(dom.saturation_bound * in_fmt.scale)))
    ulp_in = in_fmt.ulp
    ulp_out = kernel.out_fmt.ulp
    clamp = dom.clamp_magnitude
    dlimit = dom.limit
    tanh = math.tanh
    ev = kernel.eval_raw
    max_err = -1.0
    argmax = 0.0
    squares = []
    for raw in range(-hi, hi + 1):
        x = raw * ulp_in
        ax = -x if x < 0 else x
        if ax >= dlimit:
            ideal = clamp if x > 0 else -clamp
        else:
            ideal = tanh(x)
        err = ev(raw) * ulp_out - ideal
        if err < 0.0:
            err = -err
        squares.append(err * err)
        if err > max_err:
            max_err = err
            argmax = x
    mse = math.fsum(squares) / len(squares)
    return ErrorReport(max_err, argmax, mse, math.sqrt(mse), len(squares),
                       include_clamp_region)


@lru_cache(maxsize=None)
def _cached_sweep(kernel: Kernel) -> ErrorReport:
    return sweep_error(kernel)


def sweep_parameter(method: str, params: Sequence[Param],
                    in_fmt: Union[QFormat, str], out_fmt: Union[QFormat, str],
                    dom: DomainSpec | None = None,
                    centered: bool = False) -> list[SweepPoint]:
    """Build one kernel per parameter and sweep each; params must be
    strictly ordered (refining or coarsening)."""
    if len(params) < 2:
        raise ValueError("need at least 2 parameters")
    pairs = list(zip(params, params[1:]))
    if not (all(a < b for a, b in pairs) or all(a > b for a, b in pairs)):
        raise ValueError(f"parameters must be strictly ordered, got {params!r}")
    points = []
    for p in params:
        try:
            kernel = make_kernel(method, p, in_fmt, out_fmt, dom, centered)
        except ValueError as exc:
            raise ValueError(f"cannot build {method} kernel for parameter "
                             f"{format_param(p)}: {exc}") from exc
        points.append(SweepPoint(p, _cached_sweep(kernel)))
    return points


def format_param(param: Param) -> str:
    """Exact textual form: depths as integers, steps as 1/2**s fractions."""
    if isinstance(param, int):
        return str(param)
    frac = Fraction(param).limit_denominator(1 << 30)
    if frac.numerator == 1:
        return f"1/{frac.denominator}"
    return repr(param)


def error_csv_row(method: str, param: Param, in_fmt: QFormat,
                  out_fmt: QFormat, range_limit: float,
                  rep: ErrorReport) -> str:
    return ",".join([
        method, format_param(param), str(in_fmt), str(out_fmt),
        repr(range_limit), repr(rep.max_abs_err), repr(rep.argmax_input),
        repr(rep.mse), repr(rep.rmse), str(rep.n_points),
    ])


# --------------------------------------------------------------------------
# Reproduction of the published six-configuration comparison (S3.12 input,
# S.15 output, ±6 domain). The published error table lists a "MSE" column
# whose magnitude (~1.2e-5) can only be a root-mean-square error: the true
# mean square of errors bounded by ~5e-5 is below 3e-9. The report therefore
# compares that column against both measured values and annotates the match.

@dataclass(frozen=True)
class Table1Row:
    label: str
    method: str
    param: Param
    published_max_err: float
    published_mse_column: float
    report: ErrorReport
    max_err_ratio: float
    rmse_ratio: float
    max_err_within_25pct: bool
    rmse_within_25pct: bool
    mse_within_25pct: bool


@dataclass(frozen=True)
class Table1Report:
    rows: tuple[Table1Row, ...]
    notes: tuple[str, ...]


TABLE1_PUBLISHED = (
    # label, method, param, published MSE column, published max error
    ("A", "pwl", 1.0 / 64, 1.24e-5, 4.65e-5),
    ("B1", "taylor3", 1.0 / 16, 1.16e-5, 3.65e-5),
    ("B2", "taylor4", 1.0 / 8, 1.17e-5, 3.23e-5),
    ("C", "catmullrom", 1.0 / 16, 1.13e-5, 3.63e-5),
    ("D", "velocity", 1.0 / 128, 9.53e-6, 3.85e-5),
    ("E", "lambert", 7, 1.50e-5, 4.87e-5),
)

TABLE1_IN_FMT = QFormat(3, 12)
TABLE1_OUT_FMT = QFormat(0, 15)
TABLE1_NOTES = (
    "the published mean-square column is compared against measured RMSE "
    "(a true MSE at these error levels would be below 3e-9)",
    "Taylor rows use midpoint-centered lookup; knot-at-or-below addressing "
    "roughly doubles the worst-case distance to the stored point and lands "
    "far outside the published figures",
    "the published PWL step is 1/64 although the quoted per-bank LUT size "
    "(384) corresponds to step 1/128; the step is kept at 1/64 here",
)


def _within(ratio: float, tol: float = 0.25) -> bool:
    return 1.0 - tol <= ratio <= 1.0 + tol


def reproduce_table1() -> Table1Report:
    """Run the six published configurations and compare measured errors
    against the published max-error and mean-square columns (±25%)."""
    dom = DomainSpec.for_format(TABLE1_OUT_FMT, 6.0)
    rows = []
    for label, method, param, pub_mse, pub_max in TABLE1_PUBLISHED:
        kernel = make_kernel(method, param, TABLE1_IN_FMT, TABLE1_OUT_FMT,
                             dom, centered=True)
        rep = _cached_sweep(kernel)
        max_ratio = rep.max_abs_err / pub_max
        rmse_ratio = rep.rmse / pub_mse
        rows.append(Table1Row(
            label, method, param, pub_max, pub_mse, rep,
            max_ratio, rmse_ratio,
            _within(max_ratio), _within(rmse_ratio),
            _within(rep.mse / pub_mse),
        ))
    return Table1Report(tuple(rows), TABLE1_NOTES)


def format_table1(report: Table1Report) -> str:
    lines = ["config  method      param  published_max  measured_max   ratio  "
             "published_ms  measured_rmse  ratio  verdict"]
    for r in report.rows:
        verdict = "ok" if (r.max_err_within_25pct and r.rmse_within_25pct) \
            else "OUTSIDE ±25%"
        lines.append(
            f"{r.label:<6}  {r.method:<10}  {format_param(r.param):>5}  "
            f"{r.published_max_err:>13.3e}  {r.report.max_abs_err:>12.3e}  "
            f"{r.max_err_ratio:>6.3f}  {r.published_mse_column:>12.3e}  "
            f"{r.report.rmse:>13.3e}  {r.rmse_ratio:>5.3f}  {verdict}")
    for note in report.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# Calibration: smallest ladder parameter meeting a max-error target.

_STEP_LADDER_EXPS = range(2, 11)  # steps/thresholds 1/4 .. 1/1024 by halving
_DEPTH_LADDER = range(1, 17)


def param_ladder(method: str, in_fmt: Union[QFormat, str]) -> list[Param]:
    """Coarse-to-fine parameters: steps and thresholds halve (bounded by the
    input fraction bits), continued-fraction depth increments."""
    method = canonical_method(method)
    if method == "lambert":
        return list(_DEPTH_LADDER)
    in_fmt = _as_fmt(in_fmt)
    return [2.0 ** -s for s in _STEP_LADDER_EXPS if s <= in_fmt.frac_bits]


def ladder_distance(a: Param, b: Param) -> int:
    """Number of ladder rungs between two parameters of one method."""
    if isinstance(a, int) and isinstance(b, int):
        return abs(a - b)
    return abs(step_log2(a) - step_log2(b))


def step_log2(step: Param) -> int:
    return int(round(-math.log2(float(step))))


def calibrate(method: str, in_fmt: Union[QFormat, str],
              out_fmt: Union[QFormat, str], range_limit: float,
              target: float, centered: bool = False) -> CalibrationResult:
    """Walk the parameter ladder coarse to fine and return the first
    parameter whose exhaustive max error meets ``target``.

    Raises CalibrationError (with the best attempt) when the ladder is
    exhausted; by construction the next coarser parameter of any result
    exceeds the target.
    """
    method = canonical_method(method)
    in_fmt = _as_fmt(in_fmt)
    out_fmt = _as_fmt(out_fmt)
    dom = DomainSpec.for_format(out_fmt, range_limit)
    best_param: Param | None = None
    best_err = math.inf
    for p in param_ladder(method, in_fmt):
        kernel = make_kernel(method, p, in_fmt, out_fmt, dom, centered)
        rep = _cached_sweep(kernel)
        if rep.max_abs_err <= target:
            return CalibrationResult(method, in_fmt, out_fmt, range_limit, p,
                                     rep.max_abs_err, target)
        if rep.max_abs_err < best_err:
            best_param, best_err = p, rep.max_abs_err
    assert best_param is not None
    raise CalibrationError(method, target, best_param, best_err)


def calibration_csv_row(res: CalibrationResult) -> str:
    return ",".join([
        res.method, format_param(res.param), str(res.in_fmt),
        str(res.out_fmt), repr(res.range_limit),
        repr(res.achieved_max_err), repr(res.target_ulp),
    ])


CALIBRATION_CSV_HEADER = ("method,param,in_fmt,out_fmt,range,"
                          "achieved_max_err,target_ulp")


# --------------------------------------------------------------------------
# Published parameter matrix for a one-lsb max-error budget across input
# ranges and precisions. The source never states whether "one lsb" refers
# to the input or the output precision, so each cell is calibrated under
# both readings and scored by its best ladder distance to the published
# parameter.

TABLE3_ROWS = (
    ("S2.13", "S2.13", 4.0),
    ("S2.13", "S.15", 4.0),
    ("S3.12", "S.15", 6.0),
    ("S2.5", "S.7", 4.0),
)

TABLE3_PUBLISHED: dict[tuple[int, str], Param] = {
    (0, "pwl"): 1 / 128, (0, "taylor3"): 1 / 32, (0, "taylor4"): 1 / 16,
    (0, "catmullrom"): 1 / 16, (0, "velocity"): 1 / 128, (0, "lambert"): 6,
    (1, "pwl"): 1 / 128, (1, "taylor3"): 1 / 32, (1, "taylor4"): 1 / 16,
    (1, "catmullrom"): 1 / 64, (1, "velocity"): 1 / 256, (1, "lambert"): 6,
    (2, "pwl"): 1 / 128, (2, "taylor3"): 1 / 32, (2, "taylor4"): 1 / 16,
    (2, "catmullrom"): 1 / 64, (2, "velocity"): 1 / 256, (2, "lambert"): 8,
    (3, "pwl"): 1 / 8, (3, "taylor3"): 1 / 32, (3, "taylor4"): 1 / 32,
    (3, "catmullrom"): 1 / 8, (3, "velocity"): 1 / 8, (3, "lambert"): 4,
}


@dataclass(frozen=True)
class Table3Cell:
    row: int
    in_fmt: QFormat
    out_fmt: QFormat
    range_limit: float
    method: str
    published: Param
    input_ulp_param: Param | None
    input_ulp_err: float
    output_ulp_param: Param | None
    output_ulp_err: float
    best_distance: int
    matched_by: str  # "input-ulp" | "output-ulp" | "none"


def reproduce_table3(centered: bool = False) -> list[Table3Cell]:
    """Calibrate all rows and methods under both one-lsb readings."""
    cells = []
    for row_idx, (in_s, out_s, rng) in enumerate(TABLE3_ROWS):
        in_fmt = QFormat.parse(in_s)
        out_fmt = QFormat.parse(out_s)
        for method in ("pwl", "taylor3", "taylor4", "catmullrom",
                       "velocity", "lambert"):
            published = TABLE3_PUBLISHED[(row_idx, method)]
            results: dict[str, tuple[Param | None, float]] = {}
            for tag, bits in (("input-ulp", in_fmt.frac_bits),
                              ("output-ulp", out_fmt.frac_bits)):
                try:
                    res = calibrate(method, in_fmt, out_fmt, rng,
                                    2.0 ** -bits, centered)
                    results[tag] = (res.param, res.achieved_max_err)
                except CalibrationError as exc:
                    results[tag] = (None, exc.best_err)
            dists = {tag: (ladder_distance(p, published) if p is not None
                           else 10 ** 9)
                     for tag, (p, _) in results.items()}
            matched = min(dists, key=lambda t: dists[t])
            best = dists[matched]
            cells.append(Table3Cell(
                row_idx, in_fmt, out_fmt, rng, method, published,
                results["input-ulp"][0], results["input-ulp"][1],
                results["output-ulp"][0], results["output-ulp"][1],
                best, matched if best < 10 ** 9 else "none"))
    return cells
