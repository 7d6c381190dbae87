"""Command-line behavior: schemas, determinism, config-file merging, and
the documented exit codes (0 ok, 1 usage, 2 i/o, 3 validation)."""
import json
import math

import numpy as np
import pytest

from photonamp.cli import main


def run(argv):
    return main(argv)


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return header, data


class TestFig1:
    def test_csv_schema_and_peak(self, tmp_path):
        out = tmp_path / "fig1.csv"
        assert run(["fig1", "--grid-points", "257", "--output", str(out)]) == 0
        header, data = read_csv(out)
        assert header[0] == "tau"
        assert header[1:] == [
            f"p_ne{a}_n{b}" for a in (1, 10, 25) for b in (0, 1, 5, 10)
        ]
        # dark-input column for n_e=1 peaks at 1 exactly mid-grid
        col = header.index("p_ne1_n0")
        assert data[128, 0] == pytest.approx(math.pi / 2, abs=1e-9)
        assert data[128, col] == 1.0

    def test_argmax_matches_peak_formula(self, tmp_path):
        out = tmp_path / "fig1.csv"
        assert run(["fig1", "--n-e", "25", "--n", "10", "--grid-points", "4097",
                    "--output", str(out)]) == 0
        header, data = read_csv(out)
        peak_tau = data[np.argmax(data[:, 1]), 0]
        assert peak_tau == pytest.approx(math.acos(math.sqrt(10 / 35)), abs=2e-3)

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert run(["fig1", "--grid-points", "64", "--output", str(out)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_json_embeds_config(self, tmp_path):
        out = tmp_path / "fig1.json"
        assert run(["fig1", "--grid-points", "16", "--format", "json",
                    "--output", str(out)]) == 0
        body = json.loads(out.read_text())
        assert body["config"]["command"] == "fig1"
        assert body["config"]["grid_points"] == 16
        assert set(body) == {"config", "tau", "series", "summary"}
        assert len(body["tau"]) == 16

    def test_stdout_when_no_output_path(self, capsys):
        assert run(["fig1", "--n-e", "1", "--n", "0", "--grid-points", "4"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "tau,p_ne1_n0"
        assert len(lines) == 5


class TestFig2:
    def test_peak_values(self, tmp_path):
        out = tmp_path / "fig2.csv"
        assert run(["fig2", "--n-e", "25", "--grid-points", "257",
                    "--output", str(out)]) == 0
        header, data = read_csv(out)
        assert header[1:] == ["p_ne25_i0.1", "p_ne25_i0.5", "p_ne25_i0.9"]
        peaks = data[128, 1:]
        np.testing.assert_allclose(
            peaks, [math.exp(-0.1), math.exp(-0.5), math.exp(-0.9)], atol=1e-9
        )
        assert peaks[0] > peaks[1] > peaks[2]

    def test_vacuum_intensity_reduces_to_fig1_dark_curve(self, tmp_path):
        out2, out1 = tmp_path / "f2.csv", tmp_path / "f1.csv"
        assert run(["fig2", "--n-e", "5", "--intensity", "0", "--grid-points", "64",
                    "--output", str(out2)]) == 0
        assert run(["fig1", "--n-e", "5", "--n", "0", "--grid-points", "64",
                    "--output", str(out1)]) == 0
        _, d2 = read_csv(out2)
        _, d1 = read_csv(out1)
        np.testing.assert_array_equal(d2[:, 1], d1[:, 1])


class TestFig3:
    def test_paired_columns_and_widths(self, tmp_path):
        out = tmp_path / "fig3.json"
        # odd point count lands pi/2 exactly on the grid, where the pure and
        # mixed peaks coincide
        assert run(["fig3", "--grid-points", "2049", "--format", "json",
                    "--output", str(out)]) == 0
        body = json.loads(out.read_text())
        assert list(body["series"]) == [
            "p_pure_i0.1", "p_mixed_i0.1", "p_pure_i0.5", "p_mixed_i0.5"
        ]
        mixed = np.array(body["series"]["p_mixed_i0.1"])
        assert mixed[0] == pytest.approx(1 / 26, abs=1e-12)
        summary = body["summary"]
        for lam in ("0.1", "0.5"):
            assert summary[f"p_mixed_i{lam}"]["fwhm"] > summary[f"p_pure_i{lam}"]["fwhm"]
            assert summary[f"p_mixed_i{lam}"]["peak_value"] == pytest.approx(
                summary[f"p_pure_i{lam}"]["peak_value"], abs=1e-9
            )


class TestWigner:
    def test_kernel_rows_are_unit_vectors(self, tmp_path):
        out = tmp_path / "w.csv"
        assert run(["wigner", "--n-e", "3", "--n", "2", "--grid-points", "33",
                    "--output", str(out)]) == 0
        header, data = read_csv(out)
        assert header[1:] == [f"d_ne{k}" for k in range(6)]
        np.testing.assert_allclose((data[:, 1:] ** 2).sum(axis=1), 1.0, atol=1e-10)


class TestExactCompare:
    def test_decreasing_deviation_passes(self, tmp_path):
        out = tmp_path / "ec.json"
        assert run(["exact-compare", "--N", "500", "2000", "--grid-points", "64",
                    "--format", "json", "--output", str(out)]) == 0
        body = json.loads(out.read_text())
        devs = body["summary"]["max_deviation"]
        assert devs["500"] > devs["2000"]
        assert body["summary"]["monotone_decreasing"] is True

    def test_non_monotone_order_fails_validation(self, tmp_path, capsys):
        out = tmp_path / "ec.csv"
        code = run(["exact-compare", "--N", "2000", "500", "--grid-points", "64",
                    "--output", str(out)])
        assert code == 3
        assert "not strictly decreasing" in capsys.readouterr().err
        assert out.exists()  # data still written for inspection

    def test_single_atom_low_excitation_is_exact(self, tmp_path):
        out = tmp_path / "ec.json"
        assert run(["exact-compare", "--N", "1", "--n-e", "1", "--n", "0",
                    "--grid-points", "64", "--format", "json", "--output", str(out)]) == 0
        body = json.loads(out.read_text())
        assert body["summary"]["max_deviation"]["1"] < 1e-10


class TestDiscriminate:
    def test_json_report(self, tmp_path):
        out = tmp_path / "d.json"
        assert run(["discriminate", "--n-e", "10", "--observed", "0.9553",
                    "--n-max", "10", "--format", "json", "--output", str(out)]) == 0
        body = json.loads(out.read_text())
        assert body["summary"]["inferred_n"] == 5
        assert body["columns"] == ["n", "tau_peak", "distance"]
        assert len(body["rows"]) == 11

    def test_observed_is_required(self, capsys):
        assert run(["discriminate"]) == 1
        assert "observed" in capsys.readouterr().err


class TestSweep:
    def test_rows_and_threshold_columns(self, tmp_path):
        out = tmp_path / "s.csv"
        assert run(["sweep", "--n-e", "1", "25", "--n", "0", "5",
                    "--output", str(out)]) == 0
        header, data = read_csv(out)
        assert header == ["n_e", "n", "tau_peak", "tau_threshold", "p_peak"]
        assert data.shape == (4, 5)
        row_1_0 = data[(data[:, 0] == 1) & (data[:, 1] == 0)][0]
        # csv carries 12 significant digits
        assert row_1_0[2] == pytest.approx(math.pi / 2, abs=1e-10)
        assert row_1_0[3] == pytest.approx(math.asin(0.1), abs=1e-9)


class TestConfigFile:
    def test_config_supplies_defaults(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n_e=2\nn=0,1\ngrid_points=8\nformat=json\n")
        out = tmp_path / "o.json"
        assert run(["fig1", "--config", str(cfg), "--output", str(out)]) == 0
        body = json.loads(out.read_text())
        assert body["config"]["n_e"] == [2]
        assert body["config"]["n"] == [0, 1]
        assert len(body["tau"]) == 8

    def test_explicit_flag_beats_config(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("grid_points=8\n")
        out = tmp_path / "o.json"
        assert run(["fig1", "--config", str(cfg), "--grid-points", "4",
                    "--format", "json", "--output", str(out)]) == 0
        assert json.loads(out.read_text())["config"]["grid_points"] == 4

    def test_unknown_key_is_usage_error(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("bogus=1\n")
        assert run(["fig1", "--config", str(cfg)]) == 1
        assert "bogus" in capsys.readouterr().err

    def test_empty_list_value_is_usage_error(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n=\n")
        assert run(["fig1", "--config", str(cfg)]) == 1
        assert "empty list" in capsys.readouterr().err

    def test_missing_config_file_is_usage_error(self, capsys):
        assert run(["fig1", "--config", "/no/such/file.cfg"]) == 1


class TestExitCodes:
    def test_no_command_is_usage_error(self):
        assert run([]) == 1

    def test_bad_flag_value_is_usage_error(self, capsys):
        assert run(["fig1", "--grid-points", "many"]) == 1

    def test_flag_without_values_is_usage_error(self):
        assert run(["fig1", "--n-e"]) == 1
        assert run(["exact-compare", "--N"]) == 1

    def test_bad_grid_bounds_are_usage_errors(self):
        assert run(["fig1", "--tau-min", "2.0", "--tau-max", "1.0"]) == 1
        assert run(["fig1", "--grid-points", "1"]) == 1

    def test_unwritable_output_is_io_error(self, capsys):
        assert run(["fig1", "--grid-points", "4", "--output", "/no/dir/x.csv"]) == 2
        assert "i/o error" in capsys.readouterr().err

    def test_bad_format_choice_is_usage_error(self):
        assert run(["fig1", "--format", "xml"]) == 1
