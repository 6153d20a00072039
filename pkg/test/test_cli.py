import csv
import io
import json

import pytest

from approxmax.cli import main, normalize_argv
from approxmax.cli.commands import topk_defaults
from approxmax.core.fixed_point import FixedFormat
from approxmax.kernels import ExpKernelSpec, build_lut, parse_lut


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


class TestArgv:
    def test_signed_values_are_joined(self):
        argv = ["gen-lut", "--samples", "8", "--domain", "-1,1"]
        assert normalize_argv(argv) == ["gen-lut", "--samples", "8", "--domain=-1,1"]
        assert normalize_argv(["softmax", "--values", "-0.5,0.5"])[-1] == "--values=-0.5,0.5"

    def test_help_and_usage_errors(self, capsys):
        assert main(["--help"]) == 0
        assert "gen-lut" in capsys.readouterr().out
        assert main(["sweep", "--bogus"]) == 2
        assert main([]) == 2


class TestGenLut:
    def test_csv_to_stdout(self, capsys):
        assert main(["gen-lut", "--samples", "8", "--domain", "-1,1"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == 10
        assert lines[1] == "segment,lo,hi,m_raw,b_raw,m_real,b_real"

    def test_file_round_trip(self, tmp_path, capsys):
        out = tmp_path / "lut.json"
        assert main(["gen-lut", "--samples", "16", "--degree", "quadratic", "--lut-out", str(out)]) == 0
        summary = capsys.readouterr().out
        assert summary.startswith("lut-quadratic-16: P=16 shift_amount=12 bias=32768")
        assert "max_method_error=" in summary
        expected = build_lut(ExpKernelSpec.parse("lut-quadratic-16", FixedFormat(16, 15)))
        assert parse_lut(out.read_bytes()) == expected

    def test_anchor_nodes(self, capsys):
        spec = ExpKernelSpec.parse("lut-linear-64", FixedFormat(16, 15))
        assert main(["gen-lut", "--samples", "64", "--lut-format", "json"]) == 0
        assert parse_lut(capsys.readouterr().out.encode("utf-8")) == build_lut(spec)
        assert main(["gen-lut", "--samples", "64", "--lut-format", "json", "--anchor-nodes"]) == 0
        anchored = parse_lut(capsys.readouterr().out.encode("utf-8"))
        assert anchored == build_lut(spec, anchored=True)
        assert anchored.coeffs_raw[0] != build_lut(spec).coeffs_raw[0]

    def test_rejects_bad_segment_count(self, tmp_path):
        out = tmp_path / "lut.csv"
        assert main(["gen-lut", "--samples", "7", "--lut-out", str(out)]) == 2
        assert not out.exists()

    def test_coefficient_overflow(self):
        assert main(["gen-lut", "--samples", "8", "--work-format", "q16.15"]) == 2


class TestSoftmaxCommand:
    def test_values(self, capsys):
        assert main(["softmax", "--values", "0.5,-0.5", "--kernel", "exact"]) == 0
        rows = _rows(capsys.readouterr().out)
        assert rows[0] == ["index", "prob_raw", "prob_real"]
        assert [r[:2] for r in rows[1:]] == [["0", "23955"], ["1", "8813"]]
        assert float(rows[1][2]) == 23955 / 32768

    def test_input_file(self, tmp_path, capsys):
        values = tmp_path / "v.txt"
        values.write_text("-0.5\n0.5\n0.0\n")
        out = tmp_path / "p.csv"
        assert main(["softmax", "--input", str(values), "--kernel", "lut-linear-64",
                     "--format", "q12.6", "--out", str(out)]) == 0
        rows = _rows(out.read_text())
        assert len(rows) == 4
        assert int(rows[2][1]) > int(rows[3][1]) > int(rows[1][1])

    def test_degenerate_exit_code(self, capsys):
        code = main(["softmax", "--values", "-100,-100", "--format", "q16.0", "--kernel", "exact"])
        assert code == 4
        assert capsys.readouterr().out == ""

    def test_needs_one_source(self, tmp_path):
        assert main(["softmax", "--kernel", "exact"]) == 2
        values = tmp_path / "v.txt"
        values.write_text("0.1\n")
        assert main(["softmax", "--values", "0.1", "--input", str(values)]) == 2

    def test_bad_vector_file(self, tmp_path):
        values = tmp_path / "v.txt"
        values.write_text("0.1\nx\n")
        assert main(["softmax", "--input", str(values)]) == 3
        assert main(["softmax", "--input", str(tmp_path / "missing.txt")]) == 3


class TestSweep:
    ARGS = ["sweep", "--kernels", "taylor1,taylor3", "--k", "100", "--trials", "2"]

    def test_byte_identical_reruns(self, tmp_path):
        out, trials, summary = tmp_path / "r.csv", tmp_path / "t.csv", tmp_path / "s.json"
        argv = self.ARGS + ["--out", str(out), "--trials-out", str(trials), "--summary-out", str(summary)]
        assert main(argv) == 0
        first = [p.read_bytes() for p in (out, trials, summary)]
        assert main(argv) == 0
        assert [p.read_bytes() for p in (out, trials, summary)] == first
        assert json.loads(first[2])["config"]["k"] == 100

    def test_stdout_and_reference_columns(self, capsys):
        assert main(self.ARGS + ["--compare-paper"]) == 0
        text = capsys.readouterr().out
        rows = _rows(text)
        assert rows[0][-3:] == ["reference_rmse", "reference_stddev", "reference_variance"]
        assert [r[0] for r in rows[1:]] == ["taylor1", "taylor3"]
        assert rows[2][-3] == "4.18e-05"
        assert main(self.ARGS + ["--compare-reference"]) == 0
        assert capsys.readouterr().out == text

    def test_config_file_with_overrides(self, tmp_path, capsys):
        config = tmp_path / "exp.json"
        config.write_text(json.dumps({"kernels": ["taylor2"], "k": 50, "formats": ["q12.6"], "seed": 3}))
        assert main(["sweep", "--config", str(config), "--formats", "q16.15,q12.6", "--mode", "quantized"]) == 0
        rows = _rows(capsys.readouterr().out)
        assert [(r[0], r[1], r[2], r[3], r[4]) for r in rows[1:]] == [
            ("taylor2", "q16.15", "quantized", "50", "3"),
            ("taylor2", "q12.6", "quantized", "50", "3"),
        ]

    def test_config_errors(self, tmp_path):
        assert main(["sweep", "--config", str(tmp_path / "missing.json")]) == 3
        bad = tmp_path / "bad.json"
        bad.write_text("[1, 2")
        assert main(["sweep", "--config", str(bad)]) == 2
        bad.write_text(json.dumps({"kernels": ["taylor7"]}))
        assert main(["sweep", "--config", str(bad)]) == 2

    def test_side_outputs_need_out(self, tmp_path):
        trials = tmp_path / "t.csv"
        assert main(self.ARGS + ["--trials-out", str(trials)]) == 2
        assert not trials.exists()

    def test_input_vector(self, tmp_path, capsys):
        values = tmp_path / "v.txt"
        values.write_text("0.5\n-0.5\n0.25\n0.0\n")
        assert main(["sweep", "--kernels", "lut-linear-32", "--input", str(values)]) == 0
        rows = _rows(capsys.readouterr().out)
        assert rows[1][3] == "4"


class TestTopk:
    def test_defaults(self, capsys):
        assert main(["topk", "--trials", "20"]) == 0
        rows = _rows(capsys.readouterr().out)
        header = rows[0]
        column = header.index("argmax_agreement")
        assert [r[0] for r in rows[1:]] == [
            "exact", "taylor1", "taylor2", "taylor3", "lut-linear-8", "lut-linear-16", "lut-linear-32",
        ]
        assert all(r[1] == "q12.6" and r[2] == "quantized" for r in rows[1:])
        assert all(float(r[column]) == 1.0 for r in rows[1:])

    def test_file_source_rejected(self, tmp_path):
        values = tmp_path / "v.txt"
        values.write_text("0.5\n-0.5\n")
        assert main(["topk", "--input", str(values)]) == 2

    def test_scenario_defaults(self, tmp_path):
        assert topk_defaults()["formats"] == ["q12.6"]
        assert topk_defaults()["prescale_shift"] == 3
        assert (topk_defaults(1000)["formats"], topk_defaults(1000)["prescale_shift"]) == (["q20.10"], 1)
        assert "prescale_shift" not in topk_defaults(20)
        out, summary = tmp_path / "t.csv", tmp_path / "t.json"
        assert main(["topk", "--trials", "5", "--out", str(out), "--summary-out", str(summary)]) == 0
        assert json.loads(summary.read_text())["config"]["prescale_shift"] == 3


class TestPlot:
    def test_fit_plot_is_deterministic(self, tmp_path):
        svg, data = tmp_path / "fit.svg", tmp_path / "fit.csv"
        argv = ["plot", "--kind", "fit", "--kernel", "lut-linear-8", "--out", str(svg),
                "--data-out", str(data), "--points", "129"]
        assert main(argv) == 0
        first = svg.read_bytes()
        assert main(argv) == 0
        assert svg.read_bytes() == first
        text = first.decode("utf-8")
        assert text.lstrip().startswith("<?xml")
        assert "nodes (9)" in text

    def test_error_data(self, tmp_path):
        svg, data = tmp_path / "err.svg", tmp_path / "err.csv"
        assert main(["plot", "--kind", "error", "--kernel", "taylor3", "--out", str(svg),
                     "--data-out", str(data), "--points", "65"]) == 0
        rows = _rows(data.read_text())
        assert rows[0] == ["x", "exp", "approx", "error"]
        for x, exp, approx, error in rows[1:]:
            assert float(error) == float(approx) - float(exp)
        assert ["0.0", "1.0", "1.0", "0.0"] in rows

    def test_quantized_mode(self, tmp_path):
        svg, data = tmp_path / "q.svg", tmp_path / "q.csv"
        assert main(["plot", "--kind", "error", "--kernel", "lut-quadratic-16", "--mode", "quantized",
                     "--format", "q12.6", "--out", str(svg), "--data-out", str(data)]) == 0
        rows = _rows(data.read_text())
        # q12.6 has 128 raw values inside [-1, 1)
        assert len(rows) == 129

    def test_unknown_kind(self, tmp_path):
        assert main(["plot", "--kind", "surface", "--kernel", "taylor1", "--out", str(tmp_path / "x.svg")]) == 2
