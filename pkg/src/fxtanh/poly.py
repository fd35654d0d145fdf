"""Polynomial-family tanh kernels over fixed-point inputs.

Three methods share the same msb-address / lsb-fraction lookup structure:

* piecewise-linear interpolation between adjacent stored tanh values,
* a truncated Taylor polynomial around a stored center, with the
  derivatives recovered at runtime from the stored tanh value itself,
* uniform Catmull-Rom spline interpolation over four control points.

Tables store raw output codes quantized to the output precision; the
interpolation arithmetic itself runs in doubles (>= 32 fraction bits) and
the result is rounded exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fixedpoint import FxValue, QFormat, quantize, step_exponent
from .kernelbase import build_knots, clamp_code, eval_kernel, eval_kernel_raw
from .reference import DomainSpec, tanh_ref


def tanh_derivs(t: float) -> tuple[float, float, float]:
    """First three tanh derivatives expressed through the tanh value t:
    (1 - t^2, 2(t^3 - t), -2(1 - 4t^2 + 3t^4))."""
    t2 = t * t
    return (1.0 - t2,
            2.0 * (t2 * t - t),
            -2.0 * (1.0 - 4.0 * t2 + 3.0 * t2 * t2))


def catmullrom_weights(frac: float) -> tuple[float, float, float, float]:
    """Cubic Catmull-Rom basis weights at interpolation fraction ``frac``.

    Dotting these with four consecutive control points interpolates the
    middle segment; they sum to exactly 1 for all frac in [0, 1].
    """
    t2 = frac * frac
    t3 = t2 * frac
    return (0.5 * (-t3 + 2.0 * t2 - frac),
            0.5 * (3.0 * t3 - 5.0 * t2 + 2.0),
            0.5 * (-3.0 * t3 + 4.0 * t2 + frac),
            0.5 * (t3 - t2))


def _validate_grid(step: float, in_fmt: QFormat, dom: DomainSpec) -> int:
    s = step_exponent(step)
    if not 1 <= s <= in_fmt.frac_bits:
        raise ValueError(f"step {step!r} not addressable in {in_fmt}")
    if (dom.limit * (1 << s)) != int(dom.limit * (1 << s)):
        raise ValueError(f"domain limit {dom.limit} is not a multiple of step {step}")
    return s


@dataclass(frozen=True)
class PwlTable:
    """Piecewise-linear kernel: stored tanh values at every knot k*step,
    interpolated linearly with the lsb fraction."""

    step: float
    knots: tuple[int, ...]
    in_fmt: QFormat
    out_fmt: QFormat
    dom: DomainSpec
    clamp_raw: int
    step_exp: int

    @classmethod
    def build(cls, step: float, in_fmt: QFormat, out_fmt: QFormat,
              dom: DomainSpec, knots: tuple[int, ...] | None = None) -> "PwlTable":
        s = _validate_grid(step, in_fmt, dom)
        ccode = clamp_code(out_fmt, dom)
        count = int(round(dom.limit / step)) + 1  # [0, limit] inclusive
        if knots is None:
            knots = build_knots(step, count, out_fmt, ccode)
        elif len(knots) != count:
            raise ValueError(f"expected {count} knots, got {len(knots)}")
        return cls(step, tuple(knots), in_fmt, out_fmt, dom, ccode, s)

    def _approx(self, mag_raw: int) -> float:
        shift = self.in_fmt.frac_bits - self.step_exp
        k = mag_raw >> shift
        t = (mag_raw & ((1 << shift) - 1)) / (1 << shift)
        u = self.out_fmt.ulp
        fa = self.knots[k] * u
        fb = self.knots[k + 1] * u
        return fa + (fb - fa) * t

    def eval(self, x: FxValue) -> FxValue:
        return eval_kernel(self, x)

    def eval_raw(self, raw: int) -> int:
        return eval_kernel_raw(self, raw)


@dataclass(frozen=True)
class TaylorTable:
    """Truncated Taylor kernel: tanh stored at uniform centers, derivatives
    recomputed from the stored value at evaluation time.

    ``terms`` is 3 (quadratic) or 4 (cubic). With ``centered`` false the
    center is the knot at or below the input (the msbs address the table
    directly); with it true the centers sit mid-cell at (k+1/2)*step,
    halving the worst-case distance to the center.
    """

    step: float
    terms: int
    knots: tuple[int, ...]
    centered: bool
    in_fmt: QFormat
    out_fmt: QFormat
    dom: DomainSpec
    clamp_raw: int
    step_exp: int
    derivative_source: str = "runtime"

    @classmethod
    def build(cls, step: float, terms: int, in_fmt: QFormat, out_fmt: QFormat,
              dom: DomainSpec, centered: bool = False,
              derivative_source: str = "runtime",
              knots: tuple[int, ...] | None = None) -> "TaylorTable":
        if terms not in (3, 4):
            raise ValueError("terms must be 3 (quadratic) or 4 (cubic)")
        if derivative_source not in ("runtime", "stored"):
            raise ValueError("derivative_source must be 'runtime' or 'stored'")
        s = _validate_grid(step, in_fmt, dom)
        ccode = clamp_code(out_fmt, dom)
        count = int(round(dom.limit / step))  # cells [0, limit)
        if knots is None:
            offs = 0.5 if centered else 0.0
            knots = tuple(min(quantize(tanh_ref((k + offs) * step), out_fmt).raw,
                              ccode)
                          for k in range(count))
        elif len(knots) != count:
            raise ValueError(f"expected {count} knots, got {len(knots)}")
        return cls(step, terms, tuple(knots), centered, in_fmt, out_fmt, dom,
                   ccode, s, derivative_source)

    def center(self, k: int) -> float:
        """Input abscissa whose tanh is stored at index k."""
        return ((k + 0.5) if self.centered else k) * self.step

    def _approx(self, mag_raw: int) -> float:
        shift = self.in_fmt.frac_bits - self.step_exp
        k = mag_raw >> shift
        t = (mag_raw & ((1 << shift) - 1)) / (1 << shift)
        dx = ((t - 0.5) if self.centered else t) * self.step
        th = self.knots[k] * self.out_fmt.ulp
        d1, d2, d3 = tanh_derivs(th)
        if self.terms == 3:
            return th + dx * (d1 + dx * (0.5 * d2))
        return th + dx * (d1 + dx * (0.5 * d2 + dx * (d3 / 6.0)))

    def eval(self, x: FxValue) -> FxValue:
        return eval_kernel(self, x)

    def eval_raw(self, raw: int) -> int:
        return eval_kernel_raw(self, raw)


@dataclass(frozen=True)
class CrTable:
    """Catmull-Rom spline kernel over control points P_i = tanh(i*step) for
    i = -1 .. N+2, where N = limit/step.

    The lower boundary point is the odd extension -P_1 (exact for tanh);
    the two upper boundary points are the clamp code, which keeps the last
    segments inside range. ``control_points[i + 1]`` holds P_i.
    """

    step: float
    control_points: tuple[int, ...]
    in_fmt: QFormat
    out_fmt: QFormat
    dom: DomainSpec
    clamp_raw: int
    step_exp: int
    weights_stored: bool = False  # cost-model flag: weight LUT vs cubic logic

    @classmethod
    def build(cls, step: float, in_fmt: QFormat, out_fmt: QFormat,
              dom: DomainSpec, weights_stored: bool = False,
              control_points: tuple[int, ...] | None = None) -> "CrTable":
        s = _validate_grid(step, in_fmt, dom)
        ccode = clamp_code(out_fmt, dom)
        n = int(round(dom.limit / step))
        if control_points is None:
            inner = build_knots(step, n + 1, out_fmt, ccode)
            control_points = (-inner[1],) + inner + (ccode, ccode)
        elif len(control_points) != n + 4:
            raise ValueError(f"expected {n + 4} control points, "
                             f"got {len(control_points)}")
        return cls(step, tuple(control_points), in_fmt, out_fmt, dom, ccode,
                   s, weights_stored)

    def _approx(self, mag_raw: int) -> float:
        shift = self.in_fmt.frac_bits - self.step_exp
        k = mag_raw >> shift
        t = (mag_raw & ((1 << shift) - 1)) / (1 << shift)
        b0, b1, b2, b3 = catmullrom_weights(t)
        u = self.out_fmt.ulp
        p = self.control_points
        return (p[k] * u * b0 + p[k + 1] * u * b1
                + p[k + 2] * u * b2 + p[k + 3] * u * b3)

    def eval(self, x: FxValue) -> FxValue:
        return eval_kernel(self, x)

    def eval_raw(self, raw: int) -> int:
        return eval_kernel_raw(self, raw)


def eval_pwl(tbl: PwlTable, x: FxValue) -> FxValue:
    """Linear interpolation f(a) + (f(b) - f(a)) * t between adjacent knots,
    with odd symmetry and domain clamping."""
    return eval_kernel(tbl, x)


def eval_taylor(tbl: TaylorTable, x: FxValue) -> FxValue:
    """Horner evaluation of the truncated series around the stored center,
    with odd symmetry and domain clamping."""
    return eval_kernel(tbl, x)


def eval_catmullrom(tbl: CrTable, x: FxValue) -> FxValue:
    """Dot product of four control points with the cubic basis weights,
    with odd symmetry and domain clamping."""
    return eval_kernel(tbl, x)
