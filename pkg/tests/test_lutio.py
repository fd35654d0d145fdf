"""LUT export/import: hex round trips, C header and CSV shapes."""

import io

import pytest

from fxtanh.analysis import make_kernel
from fxtanh.fixedpoint import QFormat
from fxtanh.lutio import (export_kernel, kernel_from_dump, kernel_lut,
                          read_hex, write_hex)
from fxtanh.rational import group_vf
from fxtanh.reference import DomainSpec

S15 = QFormat.parse("S.15")
S3_12 = QFormat.parse("S3.12")
DOM6 = DomainSpec.for_format(S15, 6.0)


def hex_roundtrip(kernel):
    buf = io.StringIO()
    write_hex(kernel_lut(kernel), buf)
    buf.seek(0)
    return kernel_from_dump(read_hex(buf))


KERNELS = [
    ("pwl", 1 / 64),
    ("taylor3", 1 / 16),
    ("taylor4", 1 / 8),
    ("catmullrom", 1 / 16),
    ("velocity", 1 / 128),
]


class TestHexRoundTrip:
    @pytest.mark.parametrize("method,param", KERNELS)
    def test_rebuilt_kernel_identical(self, method, param):
        original = make_kernel(method, param, S3_12, S15, DOM6)
        rebuilt = hex_roundtrip(original)
        assert rebuilt == original

    def test_rebuilt_kernel_bit_identical_eval(self):
        original = make_kernel("catmullrom", 1 / 16, S3_12, S15, DOM6)
        rebuilt = hex_roundtrip(original)
        for raw in range(S3_12.min_raw, S3_12.max_raw + 1, 13):
            assert original.eval_raw(raw) == rebuilt.eval_raw(raw)

    def test_idempotent_files(self):
        k = make_kernel("pwl", 1 / 64, S3_12, S15, DOM6)
        one = io.StringIO()
        write_hex(kernel_lut(k), one)
        two = io.StringIO()
        write_hex(kernel_lut(hex_roundtrip(k)), two)
        assert one.getvalue() == two.getvalue()

    def test_centered_taylor_flag_survives(self):
        k = make_kernel("taylor3", 1 / 16, S3_12, S15, DOM6, centered=True)
        rebuilt = hex_roundtrip(k)
        assert rebuilt.centered
        assert rebuilt == k

    def test_grouped_tables_rebuild_from_plain_entries(self):
        plain = make_kernel("velocity", 1 / 128, S3_12, S15, DOM6)
        rebuilt = group_vf(hex_roundtrip(plain))
        assert rebuilt == group_vf(plain)


class TestHexFormat:
    def test_negative_entries_twos_complement(self):
        # the spline table's odd-extension point is negative
        k = make_kernel("catmullrom", 1 / 16, S3_12, S15, DOM6)
        buf = io.StringIO()
        write_hex(kernel_lut(k), buf)
        lines = [l for l in buf.getvalue().splitlines()
                 if not l.startswith("//")]
        first = int(lines[0], 16)
        assert first & 0x8000  # sign bit set
        assert first - 0x10000 == k.control_points[0]

    def test_fixed_width_uppercase(self):
        k = make_kernel("pwl", 1 / 64, S3_12, S15, DOM6)
        buf = io.StringIO()
        write_hex(kernel_lut(k), buf)
        entries = [l for l in buf.getvalue().splitlines()
                   if not l.startswith("//")]
        assert len(entries) == 6 * 64 + 1
        assert all(len(l) == 4 and l == l.upper() for l in entries)

    def test_header_carries_parameters(self):
        k = make_kernel("taylor4", 1 / 8, S3_12, S15, DOM6)
        buf = io.StringIO()
        write_hex(kernel_lut(k), buf)
        header = buf.getvalue().splitlines()[0]
        assert header.startswith("//")
        for token in ("method=taylor4", "step=1/8", "terms=4",
                      "in_fmt=S3.12", "out_fmt=S.15", "width=16"):
            assert token in header

    def test_velocity_entries_unsigned(self):
        k = make_kernel("velocity", 1 / 128, S3_12, S15, DOM6)
        dump = kernel_lut(k)
        assert not dump.signed
        assert dump.width_bits == 32
        header_kv = dict(dump.meta)
        assert header_kv["entry_fmt"] == "U12.20"

    def test_count_mismatch_detected(self):
        k = make_kernel("pwl", 1 / 64, S3_12, S15, DOM6)
        buf = io.StringIO()
        write_hex(kernel_lut(k), buf)
        text = "\n".join(buf.getvalue().splitlines()[:-1])  # drop one entry
        with pytest.raises(ValueError):
            read_hex(io.StringIO(text))


class TestOtherFormats:
    def test_cheader_shape(self):
        k = make_kernel("pwl", 1 / 64, S3_12, S15, DOM6)
        buf = io.StringIO()
        export_kernel(k, "cheader", buf)
        text = buf.getvalue()
        assert "#define FXTANH_PWL_1_64_COUNT 385" in text
        assert "#define FXTANH_PWL_1_64_WIDTH 16" in text
        assert "#define FXTANH_PWL_1_64_FRAC_BITS 15" in text
        assert "static const int16_t FXTANH_PWL_1_64[385]" in text

    def test_csv_shape(self):
        k = make_kernel("pwl", 1 / 64, S3_12, S15, DOM6)
        buf = io.StringIO()
        export_kernel(k, "csv", buf)
        lines = buf.getvalue().splitlines()
        assert lines[1] == "index,raw,hex,value"
        assert len(lines) == 2 + 385
        first = lines[2].split(",")
        assert first[0] == "0" and first[1] == "0"

    def test_unknown_format_rejected(self):
        k = make_kernel("pwl", 1 / 64, S3_12, S15, DOM6)
        with pytest.raises(ValueError):
            export_kernel(k, "vhdl", io.StringIO())

    def test_lambert_has_no_table(self):
        k = make_kernel("lambert", 7, S3_12, S15, DOM6)
        with pytest.raises(ValueError):
            kernel_lut(k)
