import csv
import json

import numpy as np
import pytest

from msfcs.cli import main


def _write(tmp_path, name, cfg):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


SYSTEM = {
    "gamma": 1.0,
    "eps": 1,
    "flux_ratio": 0.4,
    "sign_b": 1,
    "species": "NR2p1SpinUp",
    "mass": 1.0,
    "branch": 1,
}


def test_means_single_state(tmp_path):
    cfg = {
        "system": SYSTEM,
        "state": {"re_z1": 2.0, "im_z1": 0.0, "re_z2": 5.0, "im_z2": 0.0, "j": 0},
    }
    out = tmp_path / "means.csv"
    rc = main(["means", "--config", _write(tmp_path, "c.json", cfg), "--out", str(out)])
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1
    assert float(rows[0]["n1_mean"]) == pytest.approx(4.0, rel=1e-3)
    assert float(rows[0]["cross_kernel_abs"]) == 0.0
    meta = json.loads((tmp_path / "means.csv.meta.json").read_text())
    assert meta["config"] == cfg


def test_means_sweep_monotone_and_deterministic(tmp_path):
    cfg = {
        "system": SYSTEM,
        "state": {"re_z1": 2.0, "im_z1": 0.0, "re_z2": 20.0, "im_z2": 0.0, "j": 0},
        "sweep": {"param": "abs_z1", "start": 1.0, "stop": 5.0, "num": 5},
    }
    path = _write(tmp_path, "c.json", cfg)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["means", "--config", path, "--out", str(out1)]) == 0
    assert main(["means", "--config", path, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    rows = list(csv.DictReader(out1.open()))
    n1 = [float(r["n1_mean"]) for r in rows]
    assert len(n1) == 5 and all(a < b for a, b in zip(n1, n1[1:]))


def test_means_j_sweep_orthogonality(tmp_path):
    cfg = {
        "system": SYSTEM,
        "state": {"re_z1": 2.0, "im_z1": 0.0, "re_z2": 3.0, "im_z2": 0.0, "j": 0},
        "sweep": {"param": "j", "values": [0, 1]},
    }
    out = tmp_path / "j.csv"
    assert main(["means", "--config", _write(tmp_path, "c.json", cfg), "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [float(r["j"]) for r in rows] == [0.0, 1.0]
    assert all(float(r["cross_kernel_abs"]) == 0.0 for r in rows)


def test_config_errors_exit_2(tmp_path, capsys):
    bad = _write(tmp_path, "bad.json", {"system": {"gamma": 1.0}})
    assert main(["means", "--config", bad]) == 2
    unknown = _write(tmp_path, "unk.json", {"system": SYSTEM, "bogus": 1})
    assert main(["means", "--config", unknown]) == 2
    missing_state = _write(tmp_path, "ms.json", {"system": SYSTEM})
    assert main(["means", "--config", missing_state]) == 2


def test_numeric_failure_exit_3(tmp_path):
    cfg = {
        "system": SYSTEM,
        "state": {"re_z1": 45.0, "im_z1": 0.0, "re_z2": 5.0, "im_z2": 0.0, "j": 0},
    }
    assert main(["means", "--config", _write(tmp_path, "c.json", cfg)]) == 3


def test_evolve_circle(tmp_path):
    cfg = {
        "system": SYSTEM,
        "state": {"re_z1": 2.0, "im_z1": 0.5, "re_z2": 4.0, "im_z2": -1.0, "j": 0},
        "evolution": {"mode": "NonRelT", "t_max": 6.3, "samples": 100},
    }
    out = tmp_path / "evolve.csv"
    assert main(["evolve", "--config", _write(tmp_path, "c.json", cfg), "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 100
    xs = np.array([float(r["x_mean"]) for r in rows])
    ys = np.array([float(r["y_mean"]) for r in rows])
    from msfcs.evolution import fit_circle

    _, _, radius, resid = fit_circle(xs, ys)
    assert resid <= 1e-10 * radius
    # first sample sits at the configured state's mean position
    from msfcs import coherent as ch
    from msfcs.cli import build_state, build_system, load_config

    c = load_config(_write(tmp_path, "c2.json", cfg))
    field, spec = build_system(c)
    cs = build_state(c, field, spec)
    x0, y0 = ch.mean_position(cs)
    assert float(rows[0]["x_mean"]) == pytest.approx(x0, abs=1e-12)
    assert float(rows[0]["y_mean"]) == pytest.approx(y0, abs=1e-12)


def test_classical_oracle_column(tmp_path):
    cfg = {
        "system": {**SYSTEM, "species": "Spinless", "mass": 1.2},
        "classical": {"x": 1.3, "y": -0.7, "z": 0.2, "P1": 0.9, "P2": 1.4, "P3": 0.3, "mass": 1.2},
    }
    out = tmp_path / "cl.csv"
    assert main(["classical", "--config", _write(tmp_path, "c.json", cfg), "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    max_err = max(float(r["pos_err"]) for r in rows)
    assert max_err < 1e-6


def test_density_grid_output(tmp_path):
    cfg = {
        "system": SYSTEM,
        "state": {"re_z1": 1.5, "im_z1": 0.0, "re_z2": 3.0, "im_z2": 0.0, "j": 0},
        "density": {"rho_max": 60.0, "n_rho": 30, "n_phi": 16},
    }
    out = tmp_path / "d.csv"
    assert main(["density", "--config", _write(tmp_path, "c.json", cfg), "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 30 * 16
    assert all(float(r["density"]) >= 0.0 for r in rows)


def test_regimes_bundle(tmp_path):
    cfg = {
        "system": SYSTEM,
        "state": {"re_z1": 30.0, "im_z1": 0.0, "re_z2": 30.0, "im_z2": 0.0, "j": 1},
    }
    out = tmp_path / "r.json"
    assert main(["regimes", "--config", _write(tmp_path, "c.json", cfg), "--out", str(out)]) == 0
    bundle = json.loads(out.read_text())
    claims = [k for k in bundle if not k.startswith("_")]
    assert len(claims) == 11
    assert bundle["_state"]["abs_z1"] == 30.0
    assert bundle["moving_off_distance"]["passed"] is True
    assert bundle["quantum_limit_means"]["applicable"] is False


def test_json_format(tmp_path):
    cfg = {
        "system": SYSTEM,
        "state": {"re_z1": 1.0, "im_z1": 0.0, "re_z2": 2.0, "im_z2": 0.0, "j": 0},
        "output": {"format": "json"},
    }
    out = tmp_path / "m.json"
    assert main(["means", "--config", _write(tmp_path, "c.json", cfg), "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["columns"][0] == "gamma"
    assert len(data["rows"]) == 1
