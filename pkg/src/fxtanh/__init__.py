"""Bit-exact fixed-point tanh approximation kernels, an exhaustive error
analysis harness, and an analytic hardware cost model."""

from .analysis import (CalibrationError, CalibrationResult, ErrorReport,
                       SweepPoint, calibrate, make_kernel, reproduce_table1,
                       reproduce_table3, sweep_error, sweep_parameter)
from .costmodel import CostReport, cost_of
from .fixedpoint import (FxValue, LutAddress, QFormat, dequantize, mul_round,
                         quantize, sat_add, sat_neg, split_address)
from .poly import (CrTable, PwlTable, TaylorTable, catmullrom_weights,
                   eval_catmullrom, eval_pwl, eval_taylor, tanh_derivs)
from .rational import (LambertConfig, RecurrenceState, VfTable, eval_lambert,
                       eval_velocity, group_vf, lambert_continuants,
                       reciprocal_nr, velocity_factor, vf_to_tanh)
from .reference import DomainSpec, domain_bound, ideal_output, tanh_ref

__version__ = "0.1.0"

__all__ = [
    "CalibrationError", "CalibrationResult", "CostReport", "CrTable",
    "DomainSpec", "ErrorReport", "FxValue", "LambertConfig", "LutAddress",
    "PwlTable", "QFormat", "RecurrenceState", "SweepPoint", "TaylorTable",
    "VfTable", "calibrate", "catmullrom_weights", "cost_of", "dequantize",
    "domain_bound", "eval_catmullrom", "eval_lambert", "eval_pwl",
    "eval_taylor", "eval_velocity", "group_vf", "ideal_output",
    "lambert_continuants", "make_kernel", "mul_round", "quantize",
    "reciprocal_nr", "reproduce_table1", "reproduce_table3", "sat_add",
    "sat_neg", "split_address", "sweep_error", "sweep_parameter",
    "tanh_derivs", "tanh_ref", "velocity_factor", "vf_to_tanh",
]
