import json

import numpy as np
import pytest

import sturmspec.cli as cli
from sturmspec.serialize import emit_plot_data
from sturmspec.service.app import app

CONST_ZERO = {"kind": "const", "params": {"c": 0.0}, "nodes": 16}
COS2 = {
    "kind": "trig",
    "params": {"terms": [{"fn": "cos", "amplitude": 1.0, "frequency": 1.0}]},
    "nodes": 500,
}


def write_config(tmp_path, payload, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestSpectrumCommand:
    def test_json_output(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"potential": CONST_ZERO, "bc": "D", "count": 3})
        assert cli.run_cli(["spectrum", "--config", cfg]) == 0
        body = json.loads(capsys.readouterr().out)
        assert [e["mu"] for e in body["eigenvalues"]] == pytest.approx(
            [np.pi**2, 4 * np.pi**2, 9 * np.pi**2], rel=1e-7
        )

    def test_csv_output(self, tmp_path):
        cfg = write_config(tmp_path, {"potential": CONST_ZERO, "bc": "N", "count": 3})
        out = tmp_path / "spectrum.csv"
        assert cli.run_cli(["spectrum", "--config", cfg, "--format", "csv", "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "index,mu,mult"
        assert len(lines) == 4
        assert lines[1].startswith("1,")

    def test_plot_out_requires_scan(self, tmp_path):
        cfg = write_config(tmp_path, {"potential": CONST_ZERO, "bc": "D", "count": 1})
        rc = cli.run_cli(
            ["spectrum", "--config", cfg, "--quiet", "--plot-out", str(tmp_path / "p.csv")]
        )
        assert rc == 2

    def test_plot_out_writes_scan_series(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "potential": CONST_ZERO,
                "bc": "D",
                "count": 1,
                "scan": {"lo": 1.0, "hi": 50.0, "points": 20},
            },
        )
        plot = tmp_path / "scan.csv"
        rc = cli.run_cli(["spectrum", "--config", cfg, "--quiet", "--plot-out", str(plot)])
        assert rc == 0
        lines = plot.read_text().strip().splitlines()
        assert lines[0] == "label,x,y"
        assert len(lines) == 21


class TestExitCodes:
    def test_malformed_json_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert cli.run_cli(["spectrum", "--config", str(path)]) == 2
        diag = json.loads(capsys.readouterr().err.strip())
        assert diag["error"] == "input"

    def test_unknown_config_field_exits_2(self, tmp_path):
        cfg = write_config(tmp_path, {"potential": CONST_ZERO, "bc": "D", "zzz": 1})
        assert cli.run_cli(["spectrum", "--config", cfg, "--quiet"]) == 2

    def test_missing_config_file_exits_2(self, tmp_path):
        assert cli.run_cli(["spectrum", "--config", str(tmp_path / "nope.json")]) == 2

    def test_unwritable_output_path_exits_2(self, tmp_path):
        cfg = write_config(tmp_path, {"potential": CONST_ZERO, "bc": "D", "count": 2})
        bad = tmp_path / "no" / "such" / "dir" / "out.json"
        assert cli.run_cli(["spectrum", "--config", cfg, "--quiet", "--out", str(bad)]) == 2

    def test_numerical_failure_exits_3(self, tmp_path, capsys):
        # kernel lattice coarser than the potential grid is an input error,
        # but an overflow in the integrator is a numerical one
        cfg = write_config(
            tmp_path, {"potential": {**CONST_ZERO, "nodes": 16}, "mu": -700000.0, "steps": 500}
        )
        assert cli.run_cli(["trajectory", "--config", cfg, "--quiet"]) == 3
        diag = json.loads(capsys.readouterr().err.strip())
        assert diag["error"] == "numerics"

    def test_inconsistent_verdict_exits_1(self, tmp_path):
        # constant potentials satisfy the all-double periodic structure while
        # failing the half-interval condition: an honest inconsistency
        cfg = write_config(
            tmp_path,
            {
                "theorem": "T5.1",
                "potential": {"kind": "const", "params": {"c": 5.0}, "nodes": 16},
                "count": 4,
            },
        )
        assert cli.run_cli(["verify", "--config", cfg, "--quiet"]) == 1

    def test_consistent_verdict_exits_0(self, tmp_path):
        cfg = write_config(tmp_path, {"theorem": "T1", "potential": COS2, "count": 4})
        assert cli.run_cli(["verify", "--config", cfg, "--quiet"]) == 0


class TestRunCommand:
    def test_command_from_config(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path, {"command": "spectrum", "potential": CONST_ZERO, "bc": "D", "count": 2}
        )
        assert cli.run_cli(["run", "--config", cfg]) == 0
        assert "eigenvalues" in capsys.readouterr().out

    def test_missing_command_rejected(self, tmp_path):
        cfg = write_config(tmp_path, {"potential": CONST_ZERO, "bc": "D"})
        assert cli.run_cli(["run", "--config", cfg, "--quiet"]) == 2

    def test_command_mismatch_rejected(self, tmp_path):
        cfg = write_config(
            tmp_path, {"command": "compare", "potential": CONST_ZERO, "bc": "D", "count": 2}
        )
        assert cli.run_cli(["spectrum", "--config", cfg, "--quiet"]) == 2


class TestDeterminism:
    def test_byte_identical_outputs(self, tmp_path):
        cfg = write_config(tmp_path, {"potential": COS2, "bc": "D", "count": 3})
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        assert cli.run_cli(["spectrum", "--config", cfg, "--quiet", "--out", str(out1)]) == 0
        assert cli.run_cli(["spectrum", "--config", cfg, "--quiet", "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_sidecar_holds_run_metadata(self, tmp_path):
        cfg = write_config(tmp_path, {"potential": CONST_ZERO, "bc": "D", "count": 2})
        out = tmp_path / "res.json"
        cli.run_cli(["spectrum", "--config", cfg, "--quiet", "--out", str(out)])
        meta = json.loads((tmp_path / "res.json.meta.json").read_text())
        assert "generated_at" in meta
        assert "generated_at" not in out.read_text()

    def test_report_json_reparses_under_schema(self, tmp_path, capsys):
        from sturmspec.service.schemas import TheoremReportModel

        cfg = write_config(tmp_path, {"theorem": "T1", "potential": COS2, "count": 4})
        assert cli.run_cli(["verify", "--config", cfg]) == 0
        TheoremReportModel.model_validate(json.loads(capsys.readouterr().out))


class TestOtherCommands:
    def test_trajectory_csv(self, tmp_path):
        cfg = write_config(tmp_path, {"potential": CONST_ZERO, "mu": 1.0, "steps": 64})
        out = tmp_path / "traj.csv"
        assert cli.run_cli(["trajectory", "--config", cfg, "--format", "csv", "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "x,c,cp,s,sp"
        assert len(lines) == 66

    def test_kernel_csv_requires_values(self, tmp_path):
        cfg = write_config(tmp_path, {"potential": {**CONST_ZERO, "nodes": 32}, "lattice": 50})
        assert cli.run_cli(["kernel", "--config", cfg, "--quiet", "--format", "csv"]) == 2

    def test_kernel_csv(self, tmp_path):
        cfg = write_config(
            tmp_path,
            {"potential": {**CONST_ZERO, "nodes": 32}, "lattice": 50, "include_values": True},
        )
        out = tmp_path / "k.csv"
        assert cli.run_cli(["kernel", "--config", cfg, "--quiet", "--format", "csv", "--out", str(out)]) == 0
        assert out.read_text().splitlines()[0] == "x,t,K"

    def test_identities_csv(self, tmp_path):
        cfg = write_config(tmp_path, {"potential": COS2, "mu_samples": [1.0, 10.0]})
        out = tmp_path / "ident.csv"
        assert cli.run_cli(["identities", "--config", cfg, "--quiet", "--format", "csv", "--out", str(out)]) == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0].startswith("mu,a,b,c,")
        assert len(lines) == 3

    def test_compare_csv(self, tmp_path):
        cfg = write_config(
            tmp_path, {"potential": CONST_ZERO, "bc_a": "DN", "bc_b": "ND", "count": 3}
        )
        out = tmp_path / "cmp.csv"
        assert cli.run_cli(["compare", "--config", cfg, "--quiet", "--format", "csv", "--out", str(out)]) == 0
        assert out.read_text().splitlines()[0] == "index,mu_a,mu_b,gap"

    def test_oracle_roundtrip(self, tmp_path, capsys):
        cfg = write_config(tmp_path, {"potential": CONST_ZERO, "bc": "DN", "dim": 500, "count": 3})
        assert cli.run_cli(["oracle", "--config", cfg]) == 0
        body = json.loads(capsys.readouterr().out)
        assert body["max_abs_gap"] < 5e-3


class TestThinClientMode:
    def test_server_flag_round_trips_through_http(self, tmp_path, capsys, monkeypatch):
        from fastapi.testclient import TestClient

        monkeypatch.setattr(cli, "_make_client", lambda server: TestClient(app))
        cfg = write_config(tmp_path, {"potential": CONST_ZERO, "bc": "D", "count": 2})
        rc = cli.run_cli(["spectrum", "--config", cfg, "--server", "http://service"])
        assert rc == 0
        body = json.loads(capsys.readouterr().out)
        assert body["eigenvalues"][0]["mu"] == pytest.approx(np.pi**2, rel=1e-7)

    def test_server_rejection_maps_to_exit_2(self, tmp_path, monkeypatch, capsys):
        from fastapi.testclient import TestClient

        monkeypatch.setattr(cli, "_make_client", lambda server: TestClient(app))
        cfg = write_config(
            tmp_path, {"potential": {**CONST_ZERO, "kind": "poly", "params": {"coeffs": []}}, "bc": "D"}
        )
        assert cli.run_cli(["spectrum", "--config", cfg, "--quiet", "--server", "http://s"]) == 2

    def test_unreachable_server_exits_3(self, tmp_path):
        cfg = write_config(tmp_path, {"potential": CONST_ZERO, "bc": "D", "count": 2})
        rc = cli.run_cli(
            ["spectrum", "--config", cfg, "--quiet", "--server", "http://127.0.0.1:1"]
        )
        assert rc == 3


class TestEmitPlotData:
    def test_rows_and_header(self, tmp_path):
        path = tmp_path / "plot.csv"
        xs = np.linspace(0, 1, 5)
        emit_plot_data([("alpha", xs, xs**2)], path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "label,x,y"
        assert len(lines) == 6
        assert lines[1].split(",")[0] == "alpha"

    def test_empty_series_gives_header_only(self, tmp_path):
        path = tmp_path / "empty.csv"
        emit_plot_data([], path)
        assert path.read_text() == "label,x,y\n"

    def test_mismatched_lengths_rejected(self, tmp_path):
        from sturmspec.errors import InputError

        with pytest.raises(InputError):
            emit_plot_data([("bad", [0.0, 1.0], [1.0])], tmp_path / "x.csv")

    def test_discriminant_scan_stays_in_band_range(self, q_zero, tmp_path):
        import sturmspec as ss

        mus = np.linspace(0.0, 100.0, 500)
        vals = ss.hill_discriminant(q_zero, mus, steps=2000)
        emit_plot_data([("discriminant", mus, vals)], tmp_path / "disc.csv")
        assert np.max(vals) <= 2.0 + 1e-9
        assert np.min(vals) >= -2.0 - 1e-9

    def test_characteristic_scan_changes_sign_at_roots(self, q_zero, tmp_path):
        import sturmspec as ss

        mus = np.linspace(0.5, 100.0, 400)
        vals = ss.char_value(q_zero, "D", mus, steps=2000)
        emit_plot_data([("dirichlet", mus, vals)], tmp_path / "char.csv")
        signs = np.sign(vals)
        flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
        roots = mus[flips]
        assert len(roots) == 3
        for root, expected in zip(roots, [np.pi**2, 4 * np.pi**2, 9 * np.pi**2]):
            assert abs(root - expected) < mus[1] - mus[0]
