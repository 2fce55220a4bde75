"""Tests for the reporting layer, suite runner, and command-line interface.

Frozen oracle values:

* annulus_capacity q=2 (0.5, 1) = 2 pi / ln 2 = 9.064720283654388
* ring_norm p=3, r=1, unit weight = (2 pi)^2 = 39.47841760435743
* area_bound p=2, r=0.5, unit weight = pi/4 = 0.7853981633974483
* extremal_density p=2 at |z| = 0.5, unit weight = 1/pi
  = 0.3183098861837907
"""

import json
import math

import pytest

from ringcap.cli import main
from ringcap.errors import ValidationError
from ringcap.report import (CSV_COLUMNS, CheckEntry, CsvRow,
                            VerificationReport, entry_equality,
                            entry_flagged, entry_inequality, format_params,
                            read_csv_rows, rows_from_report, sort_rows,
                            write_csv_rows)
from ringcap.suites import RadiusGrid, SuiteConfig, run_suite


class TestCheckEntries:
    def test_inequality_pass(self):
        entry = entry_inequality("x", 1.0, 2.0, tolerance=1e-9)
        assert entry.status == "pass" and entry.passed
        assert entry.margin == 1.0

    def test_inequality_equality_band(self):
        entry = entry_inequality("x", 1.0, 1.0 + 1e-12, tolerance=1e-9)
        assert entry.status == "equality" and entry.passed

    def test_inequality_fail(self):
        entry = entry_inequality("x", 2.0, 1.0, tolerance=1e-9)
        assert entry.status == "fail" and not entry.passed
        assert entry.margin == -1.0

    def test_inequality_nan_fails(self):
        entry = entry_inequality("x", math.nan, 1.0, tolerance=1e-9)
        assert entry.status == "fail" and not entry.passed

    def test_equality_within_tolerance(self):
        entry = entry_equality("x", 1.0, 1.0 + 5e-10, tolerance=1e-9)
        assert entry.status == "equality" and entry.passed
        assert entry.margin == -abs(1.0 - (1.0 + 5e-10))

    def test_equality_of_two_infinities(self):
        entry = entry_equality("x", math.inf, math.inf, tolerance=0.0)
        assert entry.status == "equality" and entry.margin == 0.0

    def test_equality_fail(self):
        entry = entry_equality("x", 1.0, 2.0, tolerance=1e-9)
        assert entry.status == "fail" and not entry.passed

    @pytest.mark.parametrize("status", ["degenerate", "hypothesis-not-met", "info"])
    def test_flagged_never_fails(self, status):
        entry = entry_flagged("x", status, 1.0, 2.0)
        assert entry.passed and entry.status == status

    @pytest.mark.parametrize("status", ["pass", "fail", "equality"])
    def test_flagged_rejects_verdict_statuses(self, status):
        with pytest.raises(ValidationError):
            entry_flagged("x", status, 1.0, 2.0)

    def test_unknown_status_rejected(self):
        with pytest.raises(ValidationError):
            CheckEntry("x", 0.0, 0.0, 0.0, 0.0, True, status="maybe")

    def test_negative_tolerance_rejected(self):
        with pytest.raises(ValidationError):
            CheckEntry("x", 0.0, 0.0, 0.0, -1.0, True)

    def test_report_aggregation(self):
        report = VerificationReport()
        report.append(entry_inequality("a", 0.0, 1.0, 1e-9))
        report.append(entry_inequality("b", 1.0, 0.0, 1e-9))
        assert len(report) == 2
        assert not report.all_passed
        assert [e.name for e in report.failures()] == ["b"]


class TestCsvFormat:
    def _rows(self):
        report = VerificationReport()
        report.append(entry_inequality("r=0.5", 1.0, 2.0, 1e-9))
        report.append(entry_flagged("r=0.9", "info", math.inf, math.nan))
        return rows_from_report("demo", "check-kind", "p=2.0", report)

    def test_rows_carry_entry_names_in_params(self):
        rows = self._rows()
        assert rows[0].params == "p=2.0 r=0.5"
        assert rows[0].suite == "demo" and rows[0].check == "check-kind"

    def test_round_trip(self, tmp_path):
        rows = self._rows()
        path = tmp_path / "report.csv"
        write_csv_rows(rows, path)
        back = read_csv_rows(path)
        assert len(back) == 2
        assert back[0] == rows[0]
        assert math.isinf(back[1].lhs) and math.isnan(back[1].rhs)

    def test_header_and_line_endings(self, tmp_path):
        path = tmp_path / "report.csv"
        write_csv_rows(self._rows(), path)
        raw = path.read_bytes()
        assert b"\r" not in raw
        first = raw.split(b"\n", 1)[0].decode()
        assert tuple(first.split(",")) == CSV_COLUMNS

    def test_write_is_deterministic(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv_rows(self._rows(), first)
        write_csv_rows(self._rows(), second)
        assert first.read_bytes() == second.read_bytes()

    def test_rejects_foreign_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValidationError):
            read_csv_rows(path)

    def test_sort_rows_is_total_and_stable(self):
        rows = [CsvRow("b", "x", "p=1", 0.0, 0.0, 0.0, "pass"),
                CsvRow("a", "y", "p=2", 0.0, 0.0, 0.0, "pass"),
                CsvRow("a", "x", "p=3", 0.0, 0.0, 0.0, "pass")]
        ordered = sort_rows(rows)
        assert [(r.suite, r.check) for r in ordered] == \
            [("a", "x"), ("a", "y"), ("b", "x")]

    def test_format_params_sorted_and_repr(self):
        assert format_params(r=0.1, p=2.0, n=100) == "n=100 p=2.0 r=0.1"

    def test_row_rejects_unknown_status(self):
        with pytest.raises(ValidationError):
            CsvRow("s", "c", "", 0.0, 0.0, 0.0, "unknown")


class TestSuiteConfig:
    def test_defaults_validate(self):
        SuiteConfig().validate()

    @pytest.mark.parametrize("bad", [
        {"suite": "nonsense"},
        {"p_values": (0.5, 2.0)},
        {"p_values": (1.0,)},
        {"p_values": ()},
        {"alphas": (0.0,)},
        {"alphas": (-1.0,)},
        {"q_constant": 0.0},
        {"seed": -1},
    ])
    def test_invariants_rejected(self, bad):
        from dataclasses import replace
        with pytest.raises(ValidationError):
            replace(SuiteConfig(), **bad).validate()

    def test_radius_grid_count_must_be_at_least_two(self):
        with pytest.raises(ValidationError):
            RadiusGrid(count=1).validate()

    def test_radius_grid_needs_ordered_endpoints_inside_unit_disk(self):
        with pytest.raises(ValidationError):
            RadiusGrid(lo=0.9, hi=0.1).validate()
        with pytest.raises(ValidationError):
            RadiusGrid(lo=0.1, hi=1.0).validate()

    def test_linear_and_geometric_values(self):
        linear = RadiusGrid(0.1, 0.9, 9, "linear").values()
        assert linear[0] == pytest.approx(0.1) and linear[-1] == pytest.approx(0.9)
        assert linear[4] == pytest.approx(0.5)
        geom = RadiusGrid(0.1, 0.9, 3, "geometric").values()
        assert geom[1] == pytest.approx(0.3)

    def test_from_mapping_full(self):
        config = SuiteConfig.from_mapping({
            "suite": "area",
            "p_values": [2, 3],
            "maps": [{"kind": "power", "alpha": 1.0}],
            "radii": {"min": 0.2, "max": 0.8, "count": 4, "spacing": "geometric"},
            "q_spec": {"kind": "constant", "value": 2.0},
            "tolerances": {"abs_tol": 1e-9},
            "seed": 7,
            "output_dir": "elsewhere",
        })
        assert config.suite == "area"
        assert config.p_values == (2.0, 3.0)
        assert config.alphas == (1.0,)
        assert config.radii == RadiusGrid(0.2, 0.8, 4, "geometric")
        assert config.q_constant == 2.0
        assert config.quadrature.abs_tol == 1e-9
        assert config.seed == 7 and config.output_dir == "elsewhere"

    def test_from_mapping_rejects_unknown_keys(self):
        with pytest.raises(ValidationError):
            SuiteConfig.from_mapping({"radius": {}})

    def test_from_mapping_rejects_unknown_map_kind(self):
        with pytest.raises(ValidationError):
            SuiteConfig.from_mapping({"maps": [{"kind": "moebius"}]})


class TestRunSuite:
    def test_area_example_is_eighteen_rows(self, tmp_path):
        config = SuiteConfig(suite="area", p_values=(2.0, 3.0), alphas=(1.0,),
                             radii=RadiusGrid(0.1, 0.9, 9, "geometric"),
                             output_dir=str(tmp_path))
        rows, code = run_suite(config)
        assert code == 0
        assert len(rows) == 18
        assert all(row.status in ("pass", "equality") for row in rows)
        assert (tmp_path / "report.csv").exists()
        assert (tmp_path / "area_bounds.svg").exists()

    def test_capacity_rows_and_exit(self, tmp_path):
        config = SuiteConfig(suite="capacity", p_values=(1.5, 2.0),
                             radii=RadiusGrid(0.3, 0.7, 3),
                             output_dir=str(tmp_path))
        rows, code = run_suite(config)
        # p=1.5 -> perimeter+measure+diameter, p=2 -> perimeter+diameter
        assert code == 0 and len(rows) == 3 * 3 + 3 * 2
        assert all(row.margin > 0.0 for row in rows)
        assert (tmp_path / "capacity_bounds.svg").exists()

    def test_invalid_config_raises_before_any_output(self, tmp_path):
        config = SuiteConfig(suite="capacity", p_values=(0.5,),
                             output_dir=str(tmp_path))
        with pytest.raises(ValidationError):
            run_suite(config)
        assert not (tmp_path / "report.csv").exists()

    def test_infimum_rows_pass_and_record_seed(self, tmp_path):
        config = SuiteConfig(suite="infimum", p_values=(2.0,),
                             output_dir=str(tmp_path), seed=11)
        rows, code = run_suite(config)
        assert code == 0
        checks = {row.check for row in rows}
        assert checks == {"closed-vs-numeric", "simplex-constraint", "no-descent"}
        assert all("seed=11" in row.params for row in rows)


class TestCli:
    def test_verify_small_run_writes_outputs(self, tmp_path, capsys):
        code = main(["verify", "--suite", "area", "--p", "2",
                     "--alpha", "1", "--r-count", "3",
                     "--out", str(tmp_path)])
        assert code == 0
        assert "3 rows (0 fail)" in capsys.readouterr().out
        assert (tmp_path / "report.csv").exists()

    def test_verify_rejects_bad_exponent(self, tmp_path, capsys):
        code = main(["verify", "--suite", "capacity", "--p", "0.5,2",
                     "--out", str(tmp_path)])
        assert code == 2
        assert "p > 1" in capsys.readouterr().err

    def test_verify_config_file_with_flag_override(self, tmp_path, capsys):
        config_path = tmp_path / "config.json"
        config_path.write_text(json.dumps({
            "suite": "area", "p_values": [2], "alphas": [1],
            "radii": {"min": 0.2, "max": 0.8, "count": 5},
            "output_dir": str(tmp_path / "from_file"),
        }))
        code = main(["verify", "--config", str(config_path),
                     "--r-count", "2", "--out", str(tmp_path / "flagged")])
        assert code == 0
        rows = read_csv_rows(tmp_path / "flagged" / "report.csv")
        assert len(rows) == 2
        assert not (tmp_path / "from_file").exists()

    def test_verify_rejects_malformed_json(self, tmp_path, capsys):
        config_path = tmp_path / "config.json"
        config_path.write_text("{not json")
        code = main(["verify", "--config", str(config_path)])
        assert code == 2
        assert "invalid JSON" in capsys.readouterr().err

    def test_verify_deterministic_outputs(self, tmp_path):
        args = ["verify", "--suite", "capacity", "--p", "1.5",
                "--r-count", "4"]
        assert main(args + ["--out", str(tmp_path / "one")]) == 0
        assert main(args + ["--out", str(tmp_path / "two")]) == 0
        for name in ("report.csv", "capacity_bounds.svg"):
            first = (tmp_path / "one" / name).read_bytes()
            second = (tmp_path / "two" / name).read_bytes()
            assert first == second, name

    @pytest.mark.parametrize("argv, expected", [
        (["compute", "annulus_capacity", "q=2", "r1=0.5", "r2=1"],
         9.064720283654388),
        (["compute", "ring_norm", "p=3", "r=1"], 39.47841760435743),
        (["compute", "area_bound", "p=2", "r=0.5"], 0.7853981633974483),
        (["compute", "extremal_density", "p=2", "x=0.5", "y=0"],
         0.3183098861837907),
    ])
    def test_compute_anchors(self, capsys, argv, expected):
        assert main(argv) == 0
        out = capsys.readouterr().out.splitlines()
        assert float(out[0]) == pytest.approx(expected, rel=1e-9)
        assert out[1].startswith("error_bound=")
        assert float(out[1].split("=", 1)[1]) < 1e-8

    def test_compute_missing_parameter_lists_required_keys(self, capsys):
        code = main(["compute", "lower_modulus_bound", "p=2"])
        assert code == 2
        err = capsys.readouterr().err
        assert "r1" in err and "r2" in err

    def test_compute_rejects_unknown_parameter(self, capsys):
        assert main(["compute", "ring_norm", "p=2", "r=0.5", "z=1"]) == 2

    def test_compute_rejects_non_numeric_value(self, capsys):
        assert main(["compute", "ring_norm", "p=2", "r=big"]) == 2

    def test_compute_rejects_unknown_quantity(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["compute", "volume", "p=2"])
        assert excinfo.value.code == 2

    def test_compute_domain_error_is_usage_error(self, capsys):
        assert main(["compute", "annulus_capacity", "q=1", "r1=0.5", "r2=1"]) == 2

    def test_plot_renders_from_csv(self, tmp_path, capsys):
        assert main(["verify", "--suite", "area", "--p", "2", "--alpha", "1",
                     "--r-count", "3", "--out", str(tmp_path / "run")]) == 0
        code = main(["plot", "--from", str(tmp_path / "run" / "report.csv"),
                     "--out", str(tmp_path / "replot")])
        assert code == 0
        assert (tmp_path / "replot" / "area_bounds.svg").exists()
        original = (tmp_path / "run" / "area_bounds.svg").read_bytes()
        rendered = (tmp_path / "replot" / "area_bounds.svg").read_bytes()
        assert original == rendered

    def test_plot_empty_report_warns_without_files(self, tmp_path, capsys):
        source = tmp_path / "empty.csv"
        source.write_text("suite,check,params,lhs,rhs,margin,status\n")
        code = main(["plot", "--from", str(source),
                     "--out", str(tmp_path / "plots")])
        assert code == 0
        assert "empty report" in capsys.readouterr().err
        assert not list((tmp_path / "plots").glob("*.svg")) \
            if (tmp_path / "plots").exists() else True

    def test_plot_missing_file_is_io_error(self, capsys):
        assert main(["plot", "--from", "/nonexistent/report.csv",
                     "--out", "/tmp"]) == 3

    def test_plot_malformed_report_is_usage_error(self, tmp_path, capsys):
        source = tmp_path / "bad.csv"
        source.write_text("a,b\n1,2\n")
        assert main(["plot", "--from", str(source), "--out", str(tmp_path)]) == 2

    def test_unknown_command_exits_with_usage(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["frobnicate"])
        assert excinfo.value.code == 2
