"""Reference tanh and the saturation policy every kernel is measured against.

Errors are always taken between a kernel's dequantized output and the
*unquantized* ideal output at the exact real value of the fixed-point
input, so the reference never hides kernel error behind its own rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fixedpoint import QFormat


def tanh_ref(x: float) -> float:
    """Reference hyperbolic tangent (platform libm, correctly rounded to
    well under 1e-15 relative; spot-validated in the test suite against an
    independent high-precision evaluation)."""
    return math.tanh(x)


def domain_bound(frac_bits: int) -> float:
    """Largest input whose tanh still fits below the top output code,
    atanh(1 - 2**-frac_bits).

    Pass output *fraction* bits: a signed fractional-only format of n total
    bits has n-1 of them (so 8/12/16-bit outputs give ~2.77/4.16/5.55, and
    the one-integer-bit variants ~2.42/3.82/5.20).
    """
    if not 1 <= frac_bits <= 31:
        raise ValueError("frac_bits must be in [1, 31]")
    return math.atanh(1.0 - 2.0 ** -frac_bits)


@dataclass(frozen=True)
class DomainSpec:
    """Analysis domain: inputs beyond ±limit produce ±clamp_magnitude.

    ``limit`` may exceed the point where tanh crosses clamp_magnitude
    (``saturation_bound``); with a ±6 limit and 15 fraction bits that
    crossing sits at ~5.55, and the clamping error stays below one output
    lsb for all |x| >= limit.
    """

    limit: float = 6.0
    clamp_magnitude: float = 1.0 - 2.0 ** -15

    def __post_init__(self) -> None:
        if self.limit <= 0.0:
            raise ValueError("domain limit must be positive")
        if not 0.0 < self.clamp_magnitude < 1.0:
            raise ValueError("clamp magnitude must lie in (0, 1)")

    @classmethod
    def for_format(cls, out_fmt: QFormat, limit: float = 6.0) -> "DomainSpec":
        return cls(limit=limit, clamp_magnitude=1.0 - 2.0 ** -out_fmt.frac_bits)

    @property
    def saturation_bound(self) -> float:
        """Input where tanh reaches clamp_magnitude (may differ from limit)."""
        return math.atanh(self.clamp_magnitude)


def ideal_output(x: float, dom: DomainSpec) -> float:
    """The unquantized target: ±clamp_magnitude beyond ±limit, tanh inside."""
    if abs(x) >= dom.limit:
        return math.copysign(dom.clamp_magnitude, x)
    return tanh_ref(x)
