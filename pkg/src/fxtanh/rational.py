"""Rational-family tanh kernels: the velocity-factor trigonometric
expansion and the Lambert continued fraction, plus the Newton-Raphson
reciprocal both use for division.

The velocity factor of an angle a is f_a = (1 + tanh a) / (1 - tanh a),
which multiplies under angle addition (f_{a+b} = f_a * f_b) and equals
e^{2a} in closed form. A kernel stores factors for the power-of-two bit
weights of the input at or above a threshold, multiplies the factors of
the set bits, converts back with tanh a = (f - 1) / (f + 1), and corrects
the sub-threshold residual r with tanh(a + r) ~ tanh a + r (1 - tanh^2 a).

The Lambert kernel evaluates the depth-K truncation of the continued
fraction x / (1 + x^2 / (3 + x^2 / (5 + ...))) through the ascending
recurrence on continuant pairs, finishing with one multiply and one
reciprocal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fixedpoint import FxValue, QFormat, step_exponent
from .kernelbase import clamp_code, eval_kernel, eval_kernel_raw
from .reference import DomainSpec, tanh_ref

# Unsigned fixed-point encoding of stored velocity factors. Factors lie in
# (1, e^8 ~ 2981), so 12 integer bits suffice; entries are built already
# rounded to this grid so LUT export round-trips losslessly.
VF_ENTRY_INT_BITS = 12
VF_ENTRY_FRAC_BITS = 20


def velocity_factor(a: float) -> float:
    """(1 + tanh a) / (1 - tanh a); the multiplicative encoding of tanh."""
    t = tanh_ref(a)
    if abs(t) >= 1.0:
        raise ValueError("tanh magnitude must stay below 1")
    return (1.0 + t) / (1.0 - t)


def vf_to_tanh(f: float) -> float:
    """Inverse of velocity_factor: (f - 1) / (f + 1)."""
    if f <= 0.0:
        raise ValueError("velocity factor must be positive")
    return (f - 1.0) / (f + 1.0)


def reciprocal_nr(d: float, iters: int = 3) -> float:
    """Newton-Raphson reciprocal of d > 0.

    d is normalized to m * 2**e with m in [0.5, 1); the classic minimax
    linear seed 48/17 - (32/17) m starts within 1/17 of 1/m and each
    y <- y (2 - m y) step squares the relative error, so 3 iterations give
    better than 2**-30 and 4 reach double precision. Exact powers of two
    return exactly.
    """
    if d <= 0.0 or not math.isfinite(d):
        raise ValueError("reciprocal_nr requires d > 0")
    m, e = math.frexp(d)
    if m == 0.5:
        return math.ldexp(1.0, 1 - e)
    y = 48.0 / 17.0 - (32.0 / 17.0) * m
    for _ in range(iters):
        y = y * (2.0 - m * y)
    return math.ldexp(y, -e)


def _quantize_entry(f: float) -> float:
    """Round a factor onto the unsigned entry grid (ties away from zero);
    the result is exactly representable in a double."""
    scaled = f * (1 << VF_ENTRY_FRAC_BITS)
    fl = math.floor(scaled)
    r = scaled - fl
    raw = fl + 1 if r >= 0.5 else fl
    if raw >= 1 << (VF_ENTRY_INT_BITS + VF_ENTRY_FRAC_BITS):
        raise ValueError(f"velocity factor {f!r} outside entry range")
    return raw / (1 << VF_ENTRY_FRAC_BITS)


PairEntries = tuple[float, float, float, float]


@dataclass(frozen=True)
class VfTable:
    """Velocity-factor kernel.

    ``entries[j]`` is the stored factor for bit weight 2**(j - m) where the
    threshold is 2**-m; the weights run from the threshold up to the top
    input integer bit. ``grouped`` optionally holds the two-bit lookup
    tables (index by the pair's 2-bit value: 1, lsb factor, msb factor,
    product), trading multipliers for LUT entries. Evaluation folds pair
    factors in ascending order either way, so grouped and ungrouped tables
    produce bit-identical results.
    """

    threshold: float
    entries: tuple[float, ...]
    grouped: tuple[PairEntries, ...] | None
    in_fmt: QFormat
    out_fmt: QFormat
    dom: DomainSpec
    clamp_raw: int
    thresh_exp: int
    nr_iters: int = 3

    @classmethod
    def build(cls, threshold: float, in_fmt: QFormat, out_fmt: QFormat,
              dom: DomainSpec, nr_iters: int = 3,
              entries: tuple[float, ...] | None = None) -> "VfTable":
        m = step_exponent(threshold)
        if not 1 <= m <= in_fmt.frac_bits:
            raise ValueError(f"threshold {threshold!r} not addressable in {in_fmt}")
        count = m + in_fmt.int_bits
        if entries is None:
            entries = tuple(_quantize_entry(velocity_factor(2.0 ** k))
                            for k in range(-m, in_fmt.int_bits))
        elif len(entries) != count:
            raise ValueError(f"expected {count} entries, got {len(entries)}")
        ccode = clamp_code(out_fmt, dom)
        return cls(threshold, tuple(entries), None, in_fmt, out_fmt, dom,
                   ccode, m, nr_iters)

    def _approx(self, mag_raw: int) -> float:
        shift = self.in_fmt.frac_bits - self.thresh_exp
        sel = mag_raw >> shift
        ent = self.entries
        n = len(ent)
        prod = 1.0
        i = 0
        if self.grouped is not None:
            for quad in self.grouped:
                prod *= quad[(sel >> i) & 3]
                i += 2
        else:
            while i + 1 < n:
                code = (sel >> i) & 3
                if code == 3:
                    pf = ent[i] * ent[i + 1]
                elif code == 2:
                    pf = ent[i + 1]
                elif code == 1:
                    pf = ent[i]
                else:
                    pf = 1.0
                prod *= pf
                i += 2
            if i < n and (sel >> i) & 1:
                prod *= ent[i]
        th = (prod - 1.0) * reciprocal_nr(prod + 1.0, self.nr_iters)
        r = (mag_raw & ((1 << shift) - 1)) * self.in_fmt.ulp
        return th + r * (1.0 - th * th)

    def eval(self, x: FxValue) -> FxValue:
        return eval_kernel(self, x)

    def eval_raw(self, raw: int) -> int:
        return eval_kernel_raw(self, raw)


def group_vf(tbl: VfTable) -> VfTable:
    """Return a table whose lookups consume bit pairs, four entries per
    pair: 1 for "00", the single factors for "01"/"10", and their product
    for "11". Requires an even entry count."""
    n = len(tbl.entries)
    if n % 2:
        raise ValueError(f"grouping requires an even entry count, got {n}")
    quads = tuple((1.0, tbl.entries[i], tbl.entries[i + 1],
                   tbl.entries[i] * tbl.entries[i + 1])
                  for i in range(0, n, 2))
    return VfTable(tbl.threshold, tbl.entries, quads, tbl.in_fmt, tbl.out_fmt,
                   tbl.dom, tbl.clamp_raw, tbl.thresh_exp, tbl.nr_iters)


def eval_velocity(tbl: VfTable, x: FxValue) -> FxValue:
    """Bit-decomposed velocity-factor evaluation with residual refinement,
    odd symmetry, and domain clamping."""
    return eval_kernel(tbl, x)


@dataclass(frozen=True)
class RecurrenceState:
    """Running continuant pair (T_{n-1}, T_n) of the truncated continued
    fraction; both stay positive for real inputs."""

    t_prev: float
    t_curr: float

    def advance(self, coeff: float, x2: float) -> "RecurrenceState":
        return RecurrenceState(self.t_curr, coeff * self.t_curr + x2 * self.t_prev)


def lambert_continuants(x: float, depth: int) -> RecurrenceState:
    """Terminal pair after running T_{-1} = 1, T_0 = 2K+1,
    T_n = (2K+1-2n) T_{n-1} + x^2 T_{n-2} up to n = K = depth; the depth-K
    truncation equals x * T_{K-1} / T_K."""
    st = RecurrenceState(1.0, 2.0 * depth + 1.0)
    x2 = x * x
    for n in range(1, depth + 1):
        st = st.advance(2.0 * depth + 1.0 - 2.0 * n, x2)
    return st


@dataclass(frozen=True)
class LambertConfig:
    """Continued-fraction kernel config; ``depth`` is the number of
    division levels kept (continuants grow like (2K+1)!!, so depths beyond
    16 exceed sensible hardware widths)."""

    depth: int
    in_fmt: QFormat
    out_fmt: QFormat
    dom: DomainSpec
    clamp_raw: int
    nr_iters: int = 3

    @classmethod
    def build(cls, depth: int, in_fmt: QFormat, out_fmt: QFormat,
              dom: DomainSpec, nr_iters: int = 3) -> "LambertConfig":
        if not 1 <= depth <= 16:
            raise ValueError("depth must be in [1, 16]")
        return cls(depth, in_fmt, out_fmt, dom, clamp_code(out_fmt, dom),
                   nr_iters)

    def _approx(self, mag_raw: int) -> float:
        x = mag_raw * self.in_fmt.ulp
        st = lambert_continuants(x, self.depth)
        return (x * st.t_prev) * reciprocal_nr(st.t_curr, self.nr_iters)

    def eval(self, x: FxValue) -> FxValue:
        return eval_kernel(self, x)

    def eval_raw(self, raw: int) -> int:
        return eval_kernel_raw(self, raw)


def eval_lambert(cfg: LambertConfig, x: FxValue) -> FxValue:
    """Depth-K continued-fraction evaluation via the continuant recurrence,
    odd symmetry, and domain clamping."""
    return eval_kernel(cfg, x)
