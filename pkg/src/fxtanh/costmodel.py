"""Analytic hardware resource tallies per method and configuration.

Counts are symbolic unit tallies (adders, multipliers, dividers, LUT
entries), not gate areas or timing: the model stops at the datapath units
a block diagram would show. All formulas are closed-form in the kernel
configuration.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .analysis import canonical_method, format_param, param_of
from .poly import CrTable, PwlTable, TaylorTable
from .rational import LambertConfig, VfTable

Kernel = Union[PwlTable, TaylorTable, CrTable, VfTable, LambertConfig]

COST_CSV_HEADER = ("method,config,adders,multipliers,squarers,dividers,"
                   "lut_entries,lut_banks,stages")


@dataclass(frozen=True)
class CostReport:
    adders: int
    multipliers: int
    squarers: int
    dividers: int
    lut_entries: int
    lut_banks: int
    pipeline_stages: int  # 0 for the combinational models
    notes: str

    def __post_init__(self) -> None:
        counts = (self.adders, self.multipliers, self.squarers, self.dividers,
                  self.lut_entries, self.lut_banks, self.pipeline_stages)
        if any(c < 0 for c in counts):
            raise ValueError("resource counts must be nonnegative")
        if self.lut_entries % self.lut_banks:
            raise ValueError("lut_entries must divide evenly across banks")


def _range_over_step(kernel) -> int:
    return int(round(kernel.dom.limit / kernel.step))


def _cost_pwl(k: PwlTable) -> CostReport:
    entries = _range_over_step(k)
    per_bank = entries // 2
    notes = (f"interpolator: two adders, one multiplier; hardwired LUT split "
             f"into two banks with alternate entries, {per_bank} per bank; a "
             f"384-entry bank arises at step 1/128 over range "
             f"{k.dom.limit:g}, not at the published step 1/64 "
             f"({_range_over_step(k) // 2}-entry banks)")
    return CostReport(adders=2, multipliers=1, squarers=0, dividers=0,
                      lut_entries=entries, lut_banks=2, pipeline_stages=0,
                      notes=notes)


def _cost_taylor(k: TaylorTable) -> CostReport:
    degree = k.terms - 1
    entries = _range_over_step(k)
    notes = (f"Horner form: one adder and one multiplier per polynomial "
             f"degree ({degree}); derivatives "
             + ("recomputed from the stored tanh value at runtime"
                if k.derivative_source == "runtime" else
                f"stored alongside the function values (coefficient LUT "
                f"grows the table {k.terms}x)"))
    return CostReport(adders=degree, multipliers=degree, squarers=0,
                      dividers=0, lut_entries=entries, lut_banks=1,
                      pipeline_stages=0, notes=notes)


def _cost_catmullrom(k: CrTable) -> CostReport:
    n = _range_over_step(k)
    entries = n + 4  # control points include three boundary extensions
    if k.weights_stored:
        weight_entries = 4 * (1 << (k.in_fmt.frac_bits - k.step_exp))
        entries += weight_entries
        adders, mults = 3, 4
        notes = (f"length-4 MAC dot product (4 multipliers, 3 adders); basis "
                 f"weights read from a {weight_entries}-entry LUT addressed "
                 f"by the interpolation lsbs")
    else:
        adders, mults = 3 + 7, 4 + 2
        notes = ("length-4 MAC dot product (4 multipliers, 3 adders); basis "
                 "weights computed by cubic logic (2 multipliers for t^2 and "
                 "t^3, 7 adders; integer coefficient scalings are shifts)")
    return CostReport(adders=adders, multipliers=mults, squarers=0,
                      dividers=0, lut_entries=entries, lut_banks=1,
                      pipeline_stages=0, notes=notes)


def _cost_velocity(k: VfTable) -> CostReport:
    nbits = k.in_fmt.int_bits + k.thresh_exp
    if k.grouped is not None:
        if nbits % 2:
            raise ValueError(f"grouped lookup needs an even bit count, "
                             f"got {nbits}")
        pairs = nbits // 2
        entries = 4 * pairs
        mults = pairs - 1
        network = f"{pairs} two-bit lookups (4-to-1 muxes) into {mults} multipliers"
    else:
        entries = nbits
        mults = nbits - 1
        network = f"{nbits} one-bit lookups (2-to-1 muxes) into {mults} multipliers"
    notes = (f"multiplier column counts the factor-product network only "
             f"({network}); conversion to tanh adds 2 adders and 1 divider, "
             f"residual refinement adds 2 adders, 1 squarer, and one further "
             f"multiplier kept out of the column")
    return CostReport(adders=4, multipliers=mults, squarers=1, dividers=1,
                      lut_entries=entries, lut_banks=1, pipeline_stages=0,
                      notes=notes)


def _cost_lambert(k: LambertConfig) -> CostReport:
    active = max(k.depth - 2, 0)
    notes = ("2 adders + 2 multipliers per pipeline stage except the first "
             "two (the opening continuants are constants and the shared "
             "squarer supplies x^2); final step adds one divider and one "
             "multiplier")
    return CostReport(adders=2 * active, multipliers=2 * active + 1,
                      squarers=1, dividers=1, lut_entries=0, lut_banks=1,
                      pipeline_stages=k.depth, notes=notes)


def cost_of(method: str, config: Kernel) -> CostReport:
    """Deterministic resource tally for a configured kernel."""
    method = canonical_method(method)
    if method == "pwl":
        return _cost_pwl(config)
    if method in ("taylor3", "taylor4"):
        return _cost_taylor(config)
    if method == "catmullrom":
        return _cost_catmullrom(config)
    if method == "velocity":
        return _cost_velocity(config)
    return _cost_lambert(config)


def cost_csv_row(method: str, config: Kernel, rep: CostReport) -> str:
    return ",".join([
        method, format_param(param_of(config)), str(rep.adders),
        str(rep.multipliers), str(rep.squarers), str(rep.dividers),
        str(rep.lut_entries), str(rep.lut_banks), str(rep.pipeline_stages),
    ])
