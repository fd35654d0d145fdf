"""Shared kernel scaffolding: odd symmetry, domain clamping, and the single
output rounding every evaluator ends with.

A kernel is an immutable config/table object exposing ``in_fmt``,
``out_fmt``, ``dom``, ``clamp_raw`` and a ``_approx(mag_raw) -> float``
magnitude path; ``eval_kernel_raw`` wraps that path with the sign and
saturation handling common to all methods.
"""

from __future__ import annotations

from typing import Protocol

from .fixedpoint import FxValue, QFormat, quantize
from .reference import DomainSpec, tanh_ref


class TanhKernel(Protocol):
    in_fmt: QFormat
    out_fmt: QFormat
    dom: DomainSpec
    clamp_raw: int

    def _approx(self, mag_raw: int) -> float: ...


def clamp_code(out_fmt: QFormat, dom: DomainSpec) -> int:
    """Raw output code of the saturated magnitude."""
    return quantize(dom.clamp_magnitude, out_fmt).raw


def build_knots(step: float, count: int, out_fmt: QFormat,
                clamp_raw: int) -> tuple[int, ...]:
    """Quantized tanh values at k*step for k < count, as raw output codes,
    capped at the clamp code."""
    return tuple(min(quantize(tanh_ref(k * step), out_fmt).raw, clamp_raw)
                 for k in range(count))


def eval_kernel_raw(kernel: TanhKernel, raw: int) -> int:
    """Evaluate a kernel on a raw input code, returning a raw output code.

    Handles odd symmetry (the most negative input code saturates to the
    most positive magnitude), the ±limit clamp, the single output
    quantization, and the |output| <= clamp_magnitude range cap.
    """
    neg = raw < 0
    mag = -raw if neg else raw
    in_fmt = kernel.in_fmt
    if mag > in_fmt.max_raw:
        mag = in_fmt.max_raw
    ccode = kernel.clamp_raw
    if mag * in_fmt.ulp >= kernel.dom.limit:
        out = ccode
    else:
        out = quantize(kernel._approx(mag), kernel.out_fmt).raw
        if out > ccode:
            out = ccode
        elif out < -ccode:
            out = -ccode
    return -out if neg else out


def eval_kernel(kernel: TanhKernel, x: FxValue) -> FxValue:
    """FxValue front end of ``eval_kernel_raw`` with a format check."""
    if x.fmt != kernel.in_fmt:
        raise ValueError(f"input format {x.fmt} does not match kernel "
                         f"format {kernel.in_fmt}")
    return FxValue(eval_kernel_raw(kernel, x.raw), kernel.out_fmt)
