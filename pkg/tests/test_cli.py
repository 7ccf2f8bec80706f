import json
import subprocess
import sys

import numpy as np
import pytest

from longwave.cli import main, parse_config, run_command
from longwave.dispersion import DispersionParams, group_velocity
from longwave.errors import ConfigError
from longwave.output import read_table


def write(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def dispersion_doc(out):
    return {"command": "dispersion", "params": {"m": 1, "kmin": 0.1, "kmax": 10, "samples": 50},
            "output": {"csv_path": str(out)}}


def propagate_doc(tmp_path, dt=0.05, steps=200, method="leapfrog"):
    return {"command": "propagate",
            "params": {"grid": {"length": 64.0, "points": 256},
                       "packet": {"k0": 2.0, "sigma": 3.0, "x0": 20.0},
                       "physics": {"m": 2.0},
                       "run": {"method": method, "dt": dt, "steps": steps, "record_every": 20}},
            "output": {"csv_path": str(tmp_path / "p.csv"), "json_path": str(tmp_path / "p.json")}}


class TestParseConfig:
    def test_minimal_dispersion(self):
        cfg = parse_config(json.dumps(dispersion_doc("d.csv")))
        assert cfg.command == "dispersion" and cfg.params["samples"] == 50

    def test_unknown_command(self):
        with pytest.raises(ConfigError) as err:
            parse_config('{"command": "warp"}')
        assert "propagate" in str(err.value) and "sweep" in str(err.value)

    def test_missing_dt_named(self, tmp_path):
        doc = propagate_doc(tmp_path)
        del doc["params"]["run"]["dt"]
        with pytest.raises(ConfigError) as err:
            parse_config(doc)
        assert any("run.dt" in p for p in err.value.problems)

    def test_all_problems_reported(self, tmp_path):
        doc = propagate_doc(tmp_path)
        del doc["params"]["run"]["dt"]
        doc["params"]["grid"]["points"] = 7
        doc["params"]["extra"] = 1
        with pytest.raises(ConfigError) as err:
            parse_config(doc)
        assert len(err.value.problems) == 3

    def test_malformed_json(self):
        with pytest.raises(ConfigError, match="malformed"):
            parse_config("{not json")

    def test_output_required(self):
        doc = dispersion_doc("d.csv")
        doc["output"] = {}
        with pytest.raises(ConfigError):
            parse_config(doc)


class TestCommands:
    def test_dispersion_csv(self, tmp_path):
        out = tmp_path / "d.csv"
        assert main(["dispersion", write(tmp_path, dispersion_doc(out))]) == 0
        cols, data = read_table(out)
        assert cols == ["k", "omega_hi", "omega_lo", "v_g"]
        assert data.shape == (50, 4)
        np.testing.assert_allclose(data[:, 3], group_velocity(data[:, 0], DispersionParams(1.0)),
                                   rtol=1e-15)

    def test_dispersion_svg_and_override(self, tmp_path):
        doc = dispersion_doc(tmp_path / "d.csv")
        doc["output"]["svg_path"] = str(tmp_path / "d.svg")
        assert main(["dispersion", write(tmp_path, doc), "--m", "0"]) == 0
        _, data = read_table(tmp_path / "d.csv")
        np.testing.assert_allclose(data[:, 1], data[:, 0], rtol=1e-15)
        assert (tmp_path / "d.svg").read_text().count("<polyline") == 2

    def test_propagate(self, tmp_path, capsys):
        assert main(["propagate", write(tmp_path, propagate_doc(tmp_path))]) == 0
        cols, data = read_table(tmp_path / "p.csv")
        assert cols == ["t", "centroid", "l2_norm"] and data.shape == (11, 3)
        summary = json.loads((tmp_path / "p.json").read_text())
        assert summary["measured_vg"] == pytest.approx(summary["expected_vg"], rel=0.02)
        assert "measured_vg" in capsys.readouterr().err

    def test_propagate_snapshots(self, tmp_path):
        doc = propagate_doc(tmp_path, method="spectral", steps=40)
        doc["output"]["snapshots_path"] = str(tmp_path / "snaps")
        assert main(["propagate", write(tmp_path, doc)]) == 0
        files = sorted((tmp_path / "snaps").iterdir())
        assert len(files) == 3 and files[0].name == "psi_00000.txt"

    def test_cfl_violation_exit_1(self, tmp_path, capsys):
        cfg = write(tmp_path, propagate_doc(tmp_path, dt=0.5))
        assert main(["propagate", cfg]) == 1
        err = capsys.readouterr().err
        assert err.startswith("error:") and "0.125" in err

    def test_dt_override(self, tmp_path):
        cfg = write(tmp_path, propagate_doc(tmp_path, dt=0.05))
        assert main(["propagate", cfg, "--dt", "1.0"]) == 1

    def test_invariance_maxwell(self, tmp_path):
        doc = {"command": "invariance", "params": {"fixture": "plane_em_wave"},
               "output": {"json_path": str(tmp_path / "m.json")}}
        assert main(["invariance", "maxwell", write(tmp_path, doc)]) == 0
        reports = json.loads((tmp_path / "m.json").read_text())
        assert [r["equation_id"] for r in reports] == ["faraday", "gauss_e", "gauss_b", "ampere"]
        assert all(r["l2"] < 1e-10 for r in reports)
        assert set(reports[0]) == {"equation_id", "l2", "linf", "grid_meta"}

    @pytest.mark.parametrize("family", ["conditions", "boost", "lorenz", "dirac", "continuity",
                                        "postgalilean", "vorticity"])
    def test_invariance_families(self, tmp_path, family):
        doc = {"command": "invariance", "params": {"grid": {"points": 8}},
               "output": {"json_path": str(tmp_path / "r.json"), "csv_path": str(tmp_path / "r.csv")}}
        assert main(["invariance", family, write(tmp_path, doc)]) == 0
        reports = json.loads((tmp_path / "r.json").read_text())
        assert reports and all(np.isfinite(r["l2"]) for r in reports)

    def test_decompose(self, tmp_path):
        doc = {"command": "decompose", "params": {"grid": {"points": 16}, "seed": 3},
               "output": {"json_path": str(tmp_path / "h.json")}}
        assert main(["decompose", write(tmp_path, doc)]) == 0
        reports = {r["equation_id"]: r for r in json.loads((tmp_path / "h.json").read_text())}
        assert reports["curl_A_par"]["linf"] < 1e-10
        assert reports["reconstruction"]["linf"] < 1e-13

    @pytest.mark.parametrize("conv,small", [("derived", True), ("paper", False)])
    def test_energy(self, tmp_path, conv, small):
        doc = {"command": "energy", "params": {"sign_convention": conv, "grid": {"points": 8}},
               "output": {"json_path": str(tmp_path / "e.json")}}
        assert main(["energy", write(tmp_path, doc)]) == 0
        (rep,) = json.loads((tmp_path / "e.json").read_text())
        assert (rep["l2"] < 1e-10) is small

    def test_sweep(self, tmp_path, monkeypatch):
        monkeypatch.setenv("LONGWAVE_THREADS", "2")
        base = dispersion_doc("unused.csv")
        base["params"]["samples"] = 5
        doc = {"command": "sweep", "params": {"base": base, "parameter": "params.m",
                                              "values": [0.0, 1.0, 2.0]},
               "output": {"csv_path": str(tmp_path / "s.csv")}}
        assert main(["sweep", write(tmp_path, doc)]) == 0
        cols, data = read_table(tmp_path / "s.csv")
        assert cols == ["m", "k", "omega_hi", "omega_lo", "v_g"]
        assert data.shape == (15, 5)
        np.testing.assert_array_equal(data[:, 0], np.repeat([0.0, 1.0, 2.0], 5))

    def test_determinism(self, tmp_path):
        outs = []
        for i in range(2):
            doc = propagate_doc(tmp_path)
            doc["output"] = {"csv_path": str(tmp_path / f"p{i}.csv"),
                             "json_path": str(tmp_path / f"p{i}.json"),
                             "svg_path": str(tmp_path / f"p{i}.svg")}
            assert main(["propagate", write(tmp_path, doc, f"c{i}.json")]) == 0
            outs.append([(tmp_path / f"p{i}.{ext}").read_bytes() for ext in ("csv", "json", "svg")])
        assert outs[0] == outs[1]


class TestFailures:
    def test_missing_file(self, tmp_path, capsys):
        assert main(["dispersion", str(tmp_path / "nope.json")]) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_bad_json(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text("{")
        assert main(["dispersion", str(path)]) == 2

    def test_schema_error_lines(self, tmp_path, capsys):
        doc = dispersion_doc(tmp_path / "d.csv")
        del doc["params"]["kmin"]
        doc["params"]["bogus"] = True
        assert main(["dispersion", write(tmp_path, doc)]) == 2
        lines = capsys.readouterr().err.strip().splitlines()
        assert len(lines) == 2 and all(line.startswith("error:") for line in lines)

    def test_unwritable_output(self, tmp_path, capsys):
        cfg = parse_config(dispersion_doc(tmp_path / "missing" / "dir" / "d.csv"))
        assert run_command(cfg) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_command_mismatch(self, tmp_path):
        assert main(["energy", write(tmp_path, dispersion_doc("d.csv"))]) == 2


def test_module_entry_point(tmp_path):
    cfg = write(tmp_path, dispersion_doc(tmp_path / "d.csv"))
    proc = subprocess.run([sys.executable, "-m", "longwave", "dispersion", cfg],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "dispersion: 50 rows" in proc.stderr
