"""Fixed-point core: formats, rounding, saturation, address splitting.

The multiplier/adder checks compare against exact rational arithmetic
(fractions.Fraction) followed by one explicit rounding, exhaustively for
an 8-bit format.
"""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fxtanh.fixedpoint import (FxValue, QFormat, dequantize, mul_round,
                               quantize, sat_add, sat_neg, split_address)

S15 = QFormat.parse("S.15")
S3_12 = QFormat.parse("S3.12")
S3_4 = QFormat(3, 4)  # 8-bit format for exhaustive checks


def oracle_round_ties_away(x: Fraction) -> int:
    """Independent nearest rounding, ties away from zero."""
    n, d = x.numerator, x.denominator
    q, r = divmod(abs(n), d)
    if 2 * r >= d:
        q += 1
    return q if n >= 0 else -q


def oracle_quantize(x: Fraction, fmt: QFormat) -> int:
    raw = oracle_round_ties_away(x * fmt.scale)
    return max(fmt.min_raw, min(fmt.max_raw, raw))


class TestQFormat:
    @pytest.mark.parametrize("text,ib,fb,total", [
        ("S3.12", 3, 12, 16),
        ("S.15", 0, 15, 16),
        ("S2.13", 2, 13, 16),
        ("S2.5", 2, 5, 8),
        ("S.7", 0, 7, 8),
    ])
    def test_parse(self, text, ib, fb, total):
        fmt = QFormat.parse(text)
        assert (fmt.int_bits, fmt.frac_bits, fmt.total_bits) == (ib, fb, total)
        assert str(fmt) == text

    @given(ib=st.integers(0, 15), fb=st.integers(0, 28))
    def test_roundtrip_text(self, ib, fb):
        if not 4 <= 1 + ib + fb <= 32:
            return
        fmt = QFormat(ib, fb)
        assert QFormat.parse(str(fmt)) == fmt

    def test_rejects_bad_widths(self):
        with pytest.raises(ValueError):
            QFormat(0, 2)  # 3 bits total
        with pytest.raises(ValueError):
            QFormat(20, 15)  # 36 bits total
        with pytest.raises(ValueError):
            QFormat(-1, 12)
        with pytest.raises(ValueError):
            QFormat.parse("U3.12")

    def test_ranges(self):
        assert S15.max_raw == 32767
        assert S15.min_raw == -32768
        assert S3_12.scale == 4096


class TestQuantize:
    def test_zero(self):
        assert quantize(0.0, S15).raw == 0

    def test_one_saturates(self):
        v = quantize(1.0, S15)
        assert v.raw == 32767
        assert v.saturated

    def test_tanh_one(self):
        # derived via exact rational rounding of the reference value
        t = math.tanh(1.0)
        expect = oracle_quantize(Fraction(t), S15)
        v = quantize(t, S15)
        assert v.raw == expect == 24956
        assert abs(dequantize(v) - t) <= 2.0 ** -16

    def test_ties_away(self):
        fmt = QFormat(3, 4)
        assert quantize(Fraction(1, 32), fmt).raw == 1   # exactly half an lsb
        assert quantize(Fraction(-1, 32), fmt).raw == -1
        assert quantize(Fraction(3, 32), fmt).raw == 2
        assert quantize(0.5 / 16, fmt).raw == 1          # float tie

    def test_modes(self):
        fmt = QFormat(3, 4)
        assert quantize(0.07, fmt, "floor").raw == 1
        assert quantize(0.07, fmt, "ceil").raw == 2
        assert quantize(-0.07, fmt, "trunc").raw == -1

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            quantize(math.inf, S15)

    @given(st.floats(-8.5, 8.5))
    def test_matches_rational_oracle(self, x):
        assert quantize(x, S3_12).raw == oracle_quantize(Fraction(x), S3_12)

    @given(st.floats(-10.0, 10.0))
    def test_error_bound_or_saturation(self, x):
        v = quantize(x, S3_12)
        if not v.saturated:
            assert abs(dequantize(v) - x) <= 2.0 ** -13


class TestDequantize:
    def test_examples(self):
        assert dequantize(FxValue(0, S15)) == 0.0
        assert dequantize(FxValue(32767, S15)) == 1.0 - 2.0 ** -15
        assert dequantize(FxValue(-4096, S3_12)) == -1.0

    def test_roundtrip_exhaustive_8bit(self):
        for raw in range(S3_4.min_raw, S3_4.max_raw + 1):
            assert quantize(dequantize(FxValue(raw, S3_4)), S3_4).raw == raw

    @given(st.integers(-32768, 32767))
    def test_roundtrip_16bit(self, raw):
        assert quantize(dequantize(FxValue(raw, S3_12)), S3_12).raw == raw

    def test_raw_range_checked(self):
        with pytest.raises(ValueError):
            FxValue(32768, S15)


class TestArithmetic:
    def test_mul_annihilator(self):
        zero = FxValue(0, S15)
        for raw in (-32768, -1, 0, 7, 32767):
            assert mul_round(zero, FxValue(raw, S15), S15).raw == 0

    def test_mul_quarter(self):
        half = quantize(0.5, S15)
        assert mul_round(half, half, S15).raw == 8192

    def test_sat_add_saturates(self):
        top = FxValue(S15.max_raw, S15)
        one = FxValue(1, S15)
        out = sat_add(top, one)
        assert out.raw == S15.max_raw
        assert out.saturated

    def test_sat_add_format_mismatch(self):
        with pytest.raises(ValueError):
            sat_add(FxValue(0, S15), FxValue(0, S3_12))

    def test_sat_neg_most_negative(self):
        out = sat_neg(FxValue(S15.min_raw, S15))
        assert out.raw == S15.max_raw
        assert out.saturated

    def test_mul_exhaustive_8bit_vs_rational(self):
        ulp = Fraction(1, S3_4.scale)
        codes = range(S3_4.min_raw, S3_4.max_raw + 1)
        for a in codes:
            fa = a * ulp
            for b in codes:
                got = mul_round(FxValue(a, S3_4), FxValue(b, S3_4), S3_4)
                expect = oracle_quantize(fa * b * ulp, S3_4)
                assert got.raw == expect, (a, b)

    def test_add_exhaustive_8bit_vs_rational(self):
        ulp = Fraction(1, S3_4.scale)
        codes = range(S3_4.min_raw, S3_4.max_raw + 1)
        for a in codes:
            for b in codes:
                got = sat_add(FxValue(a, S3_4), FxValue(b, S3_4))
                expect = oracle_quantize((a + b) * ulp, S3_4)
                assert got.raw == expect, (a, b)

    @given(st.integers(-32768, 32767), st.integers(-32768, 32767))
    def test_saturation_never_wraps(self, a, b):
        exact = Fraction(a) * Fraction(b)  # sign of the exact product
        out = mul_round(FxValue(a, S15), FxValue(b, S15), S15)
        if exact > 0:
            assert out.raw >= 0
        elif exact < 0:
            assert out.raw <= 0
        else:
            assert out.raw == 0

    def test_mul_widening_out_format(self):
        # product carries 24 fraction bits; rounding into 15 happens once
        a = quantize(0.3, S3_12)
        b = quantize(0.7, S3_12)
        got = mul_round(a, b, S15)
        expect = oracle_quantize(
            Fraction(a.raw, 4096) * Fraction(b.raw, 4096), S15)
        assert got.raw == expect


class TestSplitAddress:
    def test_exact_knot(self):
        addr = split_address(quantize(1.0, S3_12), 1 / 16)
        assert (addr.index, addr.fraction) == (16, 0.0)

    def test_one_lsb_past_knot(self):
        addr = split_address(FxValue(4097, S3_12), 1 / 16)
        assert (addr.index, addr.fraction) == (16, 1 / 256)

    def test_zero(self):
        addr = split_address(FxValue(0, S3_12), 1 / 16)
        assert (addr.index, addr.fraction) == (0, 0.0)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            split_address(FxValue(-1, S3_12), 1 / 16)

    def test_bad_steps_rejected(self):
        with pytest.raises(ValueError):
            split_address(FxValue(0, S3_12), 3 / 16)
        with pytest.raises(ValueError):
            split_address(FxValue(0, S3_12), 2.0 ** -13)  # finer than an lsb

    @given(st.integers(0, 32767), st.integers(0, 12))
    @settings(max_examples=300)
    def test_reconstruction_exact(self, raw, s):
        step = 2.0 ** -s
        v = FxValue(raw, S3_12)
        addr = split_address(v, step)
        assert (addr.index + addr.fraction) * step == dequantize(v)

    def test_reconstruction_exhaustive_8bit(self):
        fmt = QFormat(2, 5)
        for raw in range(0, fmt.max_raw + 1):
            addr = split_address(FxValue(raw, fmt), 1 / 8)
            assert (addr.index + addr.fraction) / 8 == raw / 32
