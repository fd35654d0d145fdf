"""Two's-complement fixed-point formats, values, and primitive arithmetic.

Everything here is bit-exact: a value is a raw integer code plus a format,
and every "nearest" rounding is round-to-nearest with ties away from zero
(the "+half, then truncate" idiom of simple datapaths). Products are held
at full width and rounded once; overflow always saturates, never wraps.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Union

Real = Union[int, float, Fraction]
RoundingMode = Literal["nearest", "floor", "ceil", "trunc"]

_FMT_RE = re.compile(r"^S(\d*)\.(\d+)$")


@dataclass(frozen=True)
class QFormat:
    """Signed fixed-point layout: one sign bit, then integer and fraction bits.

    Rendered as ``S<int_bits>.<frac_bits>`` with the integer count omitted
    when zero, e.g. ``S3.12`` or ``S.15``.
    """

    int_bits: int
    frac_bits: int

    def __post_init__(self) -> None:
        if self.int_bits < 0 or self.frac_bits < 0:
            raise ValueError("bit counts must be nonnegative")
        if not 4 <= self.total_bits <= 32:
            raise ValueError(f"total width {self.total_bits} outside [4, 32]")

    @property
    def total_bits(self) -> int:
        return 1 + self.int_bits + self.frac_bits

    @property
    def scale(self) -> int:
        return 1 << self.frac_bits

    @property
    def ulp(self) -> float:
        """Weight of the least significant bit."""
        return 2.0 ** -self.frac_bits

    @property
    def max_raw(self) -> int:
        return (1 << (self.total_bits - 1)) - 1

    @property
    def min_raw(self) -> int:
        return -(1 << (self.total_bits - 1))

    @classmethod
    def parse(cls, text: str) -> "QFormat":
        m = _FMT_RE.match(text.strip())
        if not m:
            raise ValueError(
                f"bad format string {text!r} (expected e.g. 'S3.12' or 'S.15')"
            )
        return cls(int(m.group(1) or 0), int(m.group(2)))

    def __str__(self) -> str:
        ib = self.int_bits if self.int_bits else ""
        return f"S{ib}.{self.frac_bits}"


@dataclass(frozen=True)
class FxValue:
    """A bit-exact fixed-point number: raw two's-complement code plus format.

    ``saturated`` records whether the producing operation clipped; it is
    metadata and does not participate in equality.
    """

    raw: int
    fmt: QFormat
    saturated: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if not self.fmt.min_raw <= self.raw <= self.fmt.max_raw:
            raise ValueError(f"raw code {self.raw} outside {self.fmt} range")

    @property
    def value(self) -> float:
        """Exact real value raw * 2**-frac_bits (no rounding)."""
        return self.raw * self.fmt.ulp

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class LutAddress:
    """An input split into a table index (msbs) and the residual
    interpolation fraction in [0, 1) (lsbs)."""

    index: int
    fraction: float


def _round_float(x: float, mode: RoundingMode) -> int:
    if mode == "nearest":
        f = math.floor(x)
        r = x - f  # exact: |x - floor(x)| is representable (Sterbenz)
        if r > 0.5:
            return f + 1
        if r < 0.5:
            return f
        return f + 1 if x > 0 else f
    if mode == "floor":
        return math.floor(x)
    if mode == "ceil":
        return math.ceil(x)
    if mode == "trunc":
        return math.trunc(x)
    raise ValueError(f"unknown rounding mode {mode!r}")


def _round_fraction(x: Fraction, mode: RoundingMode) -> int:
    n, d = x.numerator, x.denominator
    if mode == "nearest":
        q, r = divmod(abs(n), d)
        if 2 * r >= d:  # ties round away from zero
            q += 1
        return q if n >= 0 else -q
    if mode == "floor":
        return n // d
    if mode == "ceil":
        return -((-n) // d)
    if mode == "trunc":
        return abs(n) // d * (1 if n >= 0 else -1)
    raise ValueError(f"unknown rounding mode {mode!r}")


def _saturate(raw: int, fmt: QFormat) -> tuple[int, bool]:
    if raw > fmt.max_raw:
        return fmt.max_raw, True
    if raw < fmt.min_raw:
        return fmt.min_raw, True
    return raw, False


def quantize(x: Real, fmt: QFormat, mode: RoundingMode = "nearest") -> FxValue:
    """Round a real onto `fmt`, saturating silently at the format bounds.

    Float inputs are scaled by an exact power of two, so "nearest" is a
    true round-half-away-from-zero on the mathematical value. Fraction
    inputs are rounded with exact integer arithmetic.
    """
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("quantize requires a finite value")
        raw = _round_float(x * fmt.scale, mode)
    elif isinstance(x, Fraction):
        raw = _round_fraction(x * fmt.scale, mode)
    else:
        raw = int(x) * fmt.scale
    raw, sat = _saturate(raw, fmt)
    return FxValue(raw, fmt, sat)


def dequantize(v: FxValue) -> float:
    """Exact value raw * 2**-frac_bits; never rounds (raw fits in 31 bits)."""
    return v.raw * v.fmt.ulp


def _rshift_round_away(v: int, s: int) -> int:
    if s <= 0:
        return v << -s
    half = 1 << (s - 1)
    if v >= 0:
        return (v + half) >> s
    return -((-v + half) >> s)


def mul_round(a: FxValue, b: FxValue, out_fmt: QFormat) -> FxValue:
    """Full-width product, then a single round into `out_fmt`, saturating.

    The integer product carries frac_a + frac_b fraction bits exactly;
    there is no intermediate rounding.
    """
    prod = a.raw * b.raw
    shift = a.fmt.frac_bits + b.fmt.frac_bits - out_fmt.frac_bits
    raw, sat = _saturate(_rshift_round_away(prod, shift), out_fmt)
    return FxValue(raw, out_fmt, sat)


def sat_add(a: FxValue, b: FxValue) -> FxValue:
    """Saturating add; both operands must share one format."""
    if a.fmt != b.fmt:
        raise ValueError(f"sat_add requires matching formats ({a.fmt} vs {b.fmt})")
    raw, sat = _saturate(a.raw + b.raw, a.fmt)
    return FxValue(raw, a.fmt, sat)


def sat_neg(v: FxValue) -> FxValue:
    """Negate; the most negative code saturates to the most positive."""
    raw, sat = _saturate(-v.raw, v.fmt)
    return FxValue(raw, v.fmt, sat)


def step_exponent(step: float) -> int:
    """Exponent s of a power-of-two step 2**-s; rejects anything else."""
    if step <= 0.0 or not math.isfinite(step):
        raise ValueError(f"step must be a positive power of two, got {step!r}")
    m, e = math.frexp(step)
    if m != 0.5:
        raise ValueError(f"step must be a power of two, got {step!r}")
    return 1 - e


def split_address(v: FxValue, step: float) -> LutAddress:
    """Split a nonnegative value into LUT index and interpolation fraction.

    ``step`` must be 2**-s with 0 <= s <= frac_bits so the split is a pure
    shift/mask of the raw code: index = floor(value/step) from the msbs,
    fraction = the remaining lsbs scaled to [0, 1). The reconstruction
    (index + fraction) * step equals the input exactly.
    """
    if v.raw < 0:
        raise ValueError("split_address requires a nonnegative value "
                         "(apply odd symmetry first)")
    s = step_exponent(step)
    if not 0 <= s <= v.fmt.frac_bits:
        raise ValueError(f"step {step!r} not addressable in {v.fmt}")
    shift = v.fmt.frac_bits - s
    index = v.raw >> shift
    fraction = (v.raw & ((1 << shift) - 1)) / (1 << shift)
    return LutAddress(index, fraction)
