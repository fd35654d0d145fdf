"""LUT artifact export and import: hex word files, C headers, CSV.

The hex format is one fixed-width uppercase hex word per line in index
order (two's complement at the entry width for signed tables, plain binary
for unsigned ones), preceded by ``//`` comment lines carrying the
generation parameters as ``key=value`` pairs. Files are deterministic and
round-trip: a kernel rebuilt from its own export evaluates bit-identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Union

from .analysis import format_param, method_of
from .fixedpoint import QFormat
from .poly import CrTable, PwlTable, TaylorTable
from .rational import (VF_ENTRY_FRAC_BITS, VF_ENTRY_INT_BITS, LambertConfig,
                       VfTable)
from .reference import DomainSpec

Kernel = Union[PwlTable, TaylorTable, CrTable, VfTable]


@dataclass(frozen=True)
class LutDump:
    """One exportable table: raw integer entries plus their encoding."""

    raws: tuple[int, ...]
    width_bits: int
    frac_bits: int
    signed: bool
    meta: tuple[tuple[str, str], ...]  # ordered key=value pairs


def kernel_lut(kernel: Kernel) -> LutDump:
    """Extract the stored table of a LUT-backed kernel."""
    meta: list[tuple[str, str]] = [("method", method_of(kernel))]
    if isinstance(kernel, LambertConfig):
        raise ValueError("the continued-fraction kernel stores no lookup table")
    if isinstance(kernel, VfTable):
        raws = tuple(int(round(e * (1 << VF_ENTRY_FRAC_BITS)))
                     for e in kernel.entries)
        meta += [("threshold", format_param(kernel.threshold)),
                 ("entry_fmt", f"U{VF_ENTRY_INT_BITS}.{VF_ENTRY_FRAC_BITS}")]
        width = VF_ENTRY_INT_BITS + VF_ENTRY_FRAC_BITS
        frac = VF_ENTRY_FRAC_BITS
        signed = False
    else:
        meta.append(("step", format_param(kernel.step)))
        if isinstance(kernel, TaylorTable):
            meta += [("terms", str(kernel.terms)),
                     ("centered", str(kernel.centered).lower())]
            raws = kernel.knots
        elif isinstance(kernel, CrTable):
            meta.append(("index_offset", "-1"))  # line 0 holds point P_{-1}
            raws = kernel.control_points
        else:
            raws = kernel.knots
        width = kernel.out_fmt.total_bits
        frac = kernel.out_fmt.frac_bits
        signed = True
    meta += [
        ("in_fmt", str(kernel.in_fmt)),
        ("out_fmt", str(kernel.out_fmt)),
        ("range", repr(kernel.dom.limit)),
        ("count", str(len(raws))),
        ("width", str(width)),
        ("frac_bits", str(frac)),
        ("signed", str(signed).lower()),
    ]
    return LutDump(tuple(raws), width, frac, signed, tuple(meta))


def write_hex(dump: LutDump, stream: IO[str]) -> None:
    digits = (dump.width_bits + 3) // 4
    mask = (1 << dump.width_bits) - 1
    stream.write("// " + " ".join(f"{k}={v}" for k, v in dump.meta) + "\n")
    for r in dump.raws:
        stream.write(f"{r & mask:0{digits}X}\n")


def read_hex(stream: IO[str]) -> LutDump:
    meta: list[tuple[str, str]] = []
    raws: list[int] = []
    for line in stream:
        line = line.strip()
        if not line:
            continue
        if line.startswith("//"):
            for token in line[2:].split():
                key, _, value = token.partition("=")
                meta.append((key, value))
            continue
        raws.append(int(line, 16))
    kv = dict(meta)
    width = int(kv["width"])
    if kv.get("signed") == "true":
        sign_bit = 1 << (width - 1)
        raws = [r - (1 << width) if r & sign_bit else r for r in raws]
    if "count" in kv and int(kv["count"]) != len(raws):
        raise ValueError(f"expected {kv['count']} entries, found {len(raws)}")
    return LutDump(tuple(raws), width, int(kv["frac_bits"]),
                   kv.get("signed") == "true", tuple(meta))


def kernel_from_dump(dump: LutDump) -> Kernel:
    """Rebuild the kernel a dump was exported from, loading its entries
    verbatim so the result is bit-identical to the original."""
    kv = dict(dump.meta)
    method = kv["method"]
    in_fmt = QFormat.parse(kv["in_fmt"])
    out_fmt = QFormat.parse(kv["out_fmt"])
    dom = DomainSpec.for_format(out_fmt, float(kv["range"]))
    if method == "velocity":
        entries = tuple(r / (1 << VF_ENTRY_FRAC_BITS) for r in dump.raws)
        return VfTable.build(_parse_fraction(kv["threshold"]), in_fmt,
                             out_fmt, dom, entries=entries)
    step = _parse_fraction(kv["step"])
    if method == "pwl":
        return PwlTable.build(step, in_fmt, out_fmt, dom, knots=dump.raws)
    if method in ("taylor3", "taylor4"):
        return TaylorTable.build(step, int(kv["terms"]), in_fmt, out_fmt, dom,
                                 centered=kv.get("centered") == "true",
                                 knots=dump.raws)
    if method == "catmullrom":
        return CrTable.build(step, in_fmt, out_fmt, dom,
                             control_points=dump.raws)
    raise ValueError(f"cannot rebuild kernel for method {method!r}")


def _parse_fraction(text: str) -> float:
    if "/" in text:
        num, den = text.split("/", 1)
        return int(num) / int(den)
    return float(text)


def write_cheader(dump: LutDump, stream: IO[str]) -> None:
    """Emit the table as a constant C array with width/count/format macros."""
    kv = dict(dump.meta)
    tag = "_".join(
        [kv["method"]]
        + ([kv["terms"]] if "terms" in kv else [])
        + [(kv.get("step") or kv.get("threshold", "")).replace("/", "_")]
    ).upper().strip("_")
    name = f"FXTANH_{tag}"
    ctype = _c_int_type(dump.width_bits, dump.signed)
    stream.write("// " + " ".join(f"{k}={v}" for k, v in dump.meta) + "\n")
    stream.write(f"#define {name}_COUNT {len(dump.raws)}\n")
    stream.write(f"#define {name}_WIDTH {dump.width_bits}\n")
    stream.write(f"#define {name}_FRAC_BITS {dump.frac_bits}\n")
    stream.write(f"static const {ctype} {name}[{len(dump.raws)}] = {{\n")
    for i in range(0, len(dump.raws), 8):
        chunk = ", ".join(str(r) for r in dump.raws[i:i + 8])
        stream.write(f"    {chunk},\n")
    stream.write("};\n")


def _c_int_type(width: int, signed: bool) -> str:
    for bits in (8, 16, 32):
        if width <= bits:
            return f"int{bits}_t" if signed else f"uint{bits}_t"
    raise ValueError(f"entry width {width} exceeds 32 bits")


def write_csv(dump: LutDump, stream: IO[str]) -> None:
    digits = (dump.width_bits + 3) // 4
    mask = (1 << dump.width_bits) - 1
    stream.write("# " + " ".join(f"{k}={v}" for k, v in dump.meta) + "\n")
    stream.write("index,raw,hex,value\n")
    scale = 1 << dump.frac_bits
    for i, r in enumerate(dump.raws):
        stream.write(f"{i},{r},{r & mask:0{digits}X},{r / scale!r}\n")


def export_kernel(kernel: Kernel, kind: str, stream: IO[str]) -> None:
    dump = kernel_lut(kernel)
    if kind == "hex":
        write_hex(dump, stream)
    elif kind == "cheader":
        write_cheader(dump, stream)
    elif kind == "csv":
        write_csv(dump, stream)
    else:
        raise ValueError(f"unknown export format {kind!r}")
