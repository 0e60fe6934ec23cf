import json

import pytest

import uncstat as u
from uncstat.cli import main


@pytest.fixture
def field_paths():
    return u.dataset_paths("toothmarks")


def run(argv):
    return main([str(a) for a in argv])


class TestExitCodes:
    def test_successful_run_is_zero(self, field_paths, capsys):
        data, config = field_paths
        assert run(["--data", data, "--config", config]) == 0
        out = capsys.readouterr().out
        assert "homogeneity hypothesis: rejected" in out

    def test_missing_data_file_is_two(self, tmp_path, capsys):
        assert run(["--data", tmp_path / "nope.csv"]) == 2
        assert "error" in capsys.readouterr().err

    def test_malformed_data_is_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("population,value\n1,abc\n", encoding="utf-8")
        assert run(["--data", bad]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_bad_config_is_two(self, field_paths, tmp_path, capsys):
        data, _ = field_paths
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"case": "nonsense"}), encoding="utf-8")
        assert run(["--data", data, "--config", cfg]) == 2

    def test_bad_alpha_is_two(self, field_paths, capsys):
        data, config = field_paths
        assert run(["--data", data, "--config", config, "--alpha", "1.5"]) == 2

    def test_degenerate_sample_is_three(self, tmp_path, capsys):
        flat = tmp_path / "flat.csv"
        flat.write_text("population,value\n1,2.0\n1,2.0\n1,2.0\n", encoding="utf-8")
        assert run(["--data", flat, "--mode", "fit"]) == 3
        assert "numeric error" in capsys.readouterr().err

    def test_ambiguous_group_is_two(self, tmp_path, capsys):
        path = tmp_path / "tied.csv"
        rows = ["population,value"]
        base = (-0.2, -0.1, 0.0, 0.1, 0.2)
        for pid, shift in [("1", 0.0), ("2", 0.05), ("3", 100.0), ("4", 100.05)]:
            rows += [f"{pid},{v + shift}" for v in base]
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        assert run(["--data", path]) == 2
        assert "ambiguous" in capsys.readouterr().err
        assert run(["--data", path, "--group", "3,4"]) == 0


class TestFlags:
    def test_report_file_and_structured_format(self, field_paths, tmp_path):
        data, config = field_paths
        out = tmp_path / "report.json"
        assert run(["--data", data, "--config", config, "--format", "structured", "--report", out]) == 0
        report = u.parse_report(out.read_text(encoding="utf-8"))
        assert report.selected_group == ("3", "4", "5", "6")
        assert not report.common.decision.rejected

    def test_mode_fit_stops_early(self, field_paths, capsys):
        data, config = field_paths
        assert run(["--data", data, "--config", config, "--mode", "fit"]) == 0
        out = capsys.readouterr().out
        assert "population fits" in out
        assert "pooled test" not in out

    def test_alpha_override_changes_bands(self, field_paths, tmp_path):
        data, config = field_paths
        wide, narrow = tmp_path / "a.json", tmp_path / "b.json"
        base = ["--data", data, "--config", config, "--mode", "fit", "--format", "structured"]
        assert run(base + ["--report", wide]) == 0
        assert run(base + ["--report", narrow, "--alpha", "0.2"]) == 0
        r_wide = u.parse_report(wide.read_text(encoding="utf-8"))
        r_narrow = u.parse_report(narrow.read_text(encoding="utf-8"))
        assert r_narrow.alpha == 0.2
        band = r_narrow.populations[0].self_test.interval
        band_wide = r_wide.populations[0].self_test.interval
        assert band_wide.lower < band.lower < band.upper < band_wide.upper

    def test_theta0_override(self, field_paths, tmp_path, capsys):
        data, config = field_paths
        out = tmp_path / "r.json"
        code = run(
            ["--data", data, "--config", config, "--group", "3,4,5,6",
             "--theta0", "2.516,0.083", "--format", "structured", "--report", out]
        )
        assert code == 0
        report = u.parse_report(out.read_text(encoding="utf-8"))
        assert report.common.theta0 == u.NormalUncertain(2.516, 0.083)
        assert not report.common.decision.rejected

    def test_bad_theta0_is_two(self, field_paths, capsys):
        data, config = field_paths
        assert run(["--data", data, "--config", config, "--theta0", "oops"]) == 2

    def test_bad_group_flag_is_two(self, field_paths, capsys):
        data, config = field_paths
        assert run(["--data", data, "--config", config, "--group", "3,zzz"]) == 2

    def test_plot_data_flag(self, field_paths, tmp_path):
        data, config = field_paths
        plot = tmp_path / "points.csv"
        assert run(["--data", data, "--config", config, "--plot-data", plot]) == 0
        lines = plot.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "population,index,value,interval_source,lower,upper,is_outlier"
        assert len(lines) == 1 + 38 * 6

    def test_unwritable_report_path_is_two(self, field_paths, tmp_path, capsys):
        data, config = field_paths
        assert run(["--data", data, "--config", config, "--report", tmp_path / "no" / "dir.txt"]) == 2
