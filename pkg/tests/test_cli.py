"""Command-line surface: flag parsing, exit codes, deterministic outputs."""

import io

import pytest

from fxtanh.cli import main, parse_power_of_two, parse_target


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestParsers:
    def test_fraction(self):
        assert parse_power_of_two("1/64") == 1 / 64

    def test_power(self):
        assert parse_power_of_two("2^-6") == 1 / 64
        assert parse_power_of_two("2^0") == 1.0

    def test_decimals_rejected(self):
        with pytest.raises(ValueError):
            parse_power_of_two("0.015625")
        with pytest.raises(ValueError):
            parse_power_of_two("3/64")

    def test_target_accepts_reals(self):
        assert parse_target("2^-15") == 2.0 ** -15
        assert parse_target("3.05e-5") == 3.05e-5


class TestEval:
    def test_zero(self, capsys):
        code, out, _ = run(capsys, "eval", "--method", "pwl",
                           "--step", "1/64", "--x", "0")
        assert code == 0
        assert "output_raw=0" in out
        assert "abs_err=0.0" in out

    def test_reports_reference(self, capsys):
        code, out, _ = run(capsys, "eval", "--method", "lambert",
                           "--depth", "7", "--x", "1.0")
        assert code == 0
        assert "reference=0.7615941559557649" in out

    def test_config_letter_alias(self, capsys):
        code, out, _ = run(capsys, "eval", "--method", "B1",
                           "--step", "1/16", "--x", "0.5")
        assert code == 0
        assert "method=taylor3" in out


class TestExitCodes:
    def test_unknown_method(self, capsys):
        code, _, err = run(capsys, "eval", "--method", "cordic", "--x", "0")
        assert code == 1
        assert "error" in err

    def test_missing_param(self, capsys):
        code, _, err = run(capsys, "eval", "--method", "pwl", "--x", "0")
        assert code == 1
        assert "--step" in err

    def test_bad_flag_exits_one(self, capsys):
        with pytest.raises(SystemExit) as exc_info:
            main(["eval", "--method", "pwl", "--step", "1/64"])  # no --x
        assert exc_info.value.code == 1

    def test_bad_format_string(self, capsys):
        code, _, err = run(capsys, "eval", "--method", "pwl", "--step",
                           "1/64", "--x", "0", "--in-fmt", "Q3.12")
        assert code == 1

    def test_calibration_failure_exits_two(self, capsys):
        code, _, err = run(capsys, "calibrate", "--method", "pwl",
                           "--target", "1e-9")
        assert code == 2
        assert "calibration failed" in err

    def test_gen_lut_lambert_exits_one(self, capsys):
        code, _, err = run(capsys, "gen-lut", "--method", "lambert",
                           "--depth", "7", "--format", "hex")
        assert code == 1


class TestSweep:
    def test_csv_emitted(self, capsys):
        code, out, _ = run(capsys, "sweep", "--method", "pwl",
                           "--params", "1/8,1/16")
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("method,param,in_fmt,out_fmt,range,")
        assert len(lines) == 3
        assert lines[1].startswith("pwl,1/8,S3.12,S.15,6.0,")

    def test_lambert_params_are_depths(self, capsys):
        code, out, _ = run(capsys, "sweep", "--method", "lambert",
                           "--params", "3,5")
        assert code == 0
        assert out.splitlines()[1].startswith("lambert,3,")


class TestCalibrate:
    def test_row(self, capsys):
        code, out, _ = run(capsys, "calibrate", "--method", "pwl",
                           "--target", "2^-12")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == ("method,param,in_fmt,out_fmt,range,"
                            "achieved_max_err,target_ulp")
        fields = lines[1].split(",")
        assert fields[0] == "pwl"
        assert float(fields[5]) <= 2.0 ** -12


class TestCost:
    def test_row(self, capsys):
        code, out, _ = run(capsys, "cost", "--method", "taylor3",
                           "--step", "1/16")
        assert code == 0
        lines = out.splitlines()
        assert lines[1] == "taylor3,1/16,2,2,0,0,96,1,0"

    def test_grouped_velocity(self, capsys):
        code, out, _ = run(capsys, "cost", "--method", "velocity",
                           "--threshold", "1/256", "--in-fmt", "S2.13",
                           "--range", "4", "--grouped")
        assert code == 0
        fields = out.splitlines()[1].split(",")
        assert fields[6] == "20" and fields[3] == "4"


class TestGenLut:
    def test_line_count(self, capsys, tmp_path):
        path = tmp_path / "pwl.hex"
        code, _, _ = run(capsys, "gen-lut", "--method", "pwl", "--step",
                         "1/64", "--format", "hex", "--out", str(path))
        assert code == 0
        entries = [l for l in path.read_text().splitlines()
                   if not l.startswith("//")]
        assert len(entries) == 6 * 64 + 1

    def test_byte_identical_reruns(self, capsys, tmp_path):
        a, b = tmp_path / "a.hex", tmp_path / "b.hex"
        for path in (a, b):
            code, _, _ = run(capsys, "gen-lut", "--method", "catmullrom",
                             "--step", "1/16", "--format", "hex",
                             "--out", str(path))
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_stdout_default(self, capsys):
        code, out, _ = run(capsys, "gen-lut", "--method", "velocity",
                           "--threshold", "1/128", "--format", "csv")
        assert code == 0
        assert "index,raw,hex,value" in out


class TestTable1Command:
    def test_runs_green(self, capsys):
        code, out, _ = run(capsys, "table1")
        assert code == 0
        assert out.count("ok") >= 6

    def test_csv_mode(self, capsys):
        code, out, _ = run(capsys, "table1", "--csv")
        assert code == 0
        assert len(out.splitlines()) == 7
