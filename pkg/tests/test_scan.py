import json

import numpy as np
import pytest

from bichroma import scan
from bichroma.errors import ValidationError
from bichroma.floquet import FloquetLabel
from bichroma.scan import (ScanConfig, drive_for, read_boundaries_csv, read_json, read_map_csv,
                           read_surface_csv, run_boundary_overlays, run_classification,
                           run_simulation, run_surface_dump, run_transfer_map,
                           write_boundaries_csv, write_json, write_map_csv, write_surface_csv)

SMALL = dict(mode="map", omega0_max=1.0, omega0_count=4, delta_min=-0.5, delta_max=0.0,
             delta_count=3)


@pytest.mark.parametrize("bad", [dict(omega0_count=1), dict(pulse_area=0.0), dict(sequence=3),
                                 dict(delta_max=float("inf")), dict(mode="plot"),
                                 dict(restriction="other"), dict(workers=0),
                                 dict(omega0_min=1.0, omega0_max=0.5), dict(delta_count=2.5),
                                 dict(mode="simulate", delta1=0.0)])
def test_config_validation(bad):
    with pytest.raises(ValidationError):
        ScanConfig(**bad)


def test_config_file_and_presets(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"preset": "strong_field", "sequence": 2}))
    cfg = ScanConfig.from_file(p)
    assert (cfg.omega0_max, cfg.omega0_count, cfg.delta_count, cfg.sequence) == (5.0, 41, 21, 2)
    p.write_text(json.dumps({"sequnce": 2}))
    with pytest.raises(ValidationError, match="unknown"):
        ScanConfig.from_file(p)
    p.write_text("{not json")
    with pytest.raises(ValidationError):
        ScanConfig.from_file(p)
    assert ScanConfig.from_dict(ScanConfig(**SMALL).to_dict()) == ScanConfig(**SMALL)


def test_axes():
    cfg = ScanConfig(**SMALL)
    assert np.allclose(cfg.omega0_axis, [0.25, 0.5, 0.75, 1.0])
    assert np.allclose(cfg.delta_axis, [-0.5, -0.25, 0.0])


def test_restrictions():
    cfg = ScanConfig(**SMALL)
    d = drive_for(cfg.replace(restriction="delta2_eq_delta1_plus_2delta"), -0.3)
    assert (d.delta1, d.delta2, d.delta) == pytest.approx((0.7, -1.3, -1.0))
    assert d.delta2 == pytest.approx(d.delta1 + 2 * d.delta)
    d = drive_for(cfg.replace(restriction="independent", delta2=0.4), -0.3)
    assert (d.delta1, d.delta2) == (-0.3, 0.4)


def test_map_is_deterministic_across_worker_counts():
    cfg = ScanConfig(**SMALL)
    a = run_transfer_map(cfg)
    b = run_transfer_map(cfg.replace(workers=2))
    assert np.array_equal(a.populations, b.populations)
    assert np.array_equal(a.norm_drift, b.norm_drift)
    assert a.populations.shape == (3, 4, 3)
    assert np.all((a.populations >= 0) & (a.populations <= 1 + 1e-9))


def test_map_examples():
    cfg = ScanConfig(mode="map", omega0_min=0.3, omega0_max=0.35, omega0_count=2,
                     delta_min=-0.05, delta_max=0.0, delta_count=2)
    m1 = run_transfer_map(cfg)
    m2 = run_transfer_map(cfg.replace(sequence=2))
    assert m1.node(0.35, -0.05)[1] >= 0.9
    assert m2.node(0.35, -0.05)[1] <= 0.1 and m2.node(0.35, -0.05)[2] >= 0.9
    weak = run_transfer_map(cfg.replace(omega0_min=0.0, omega0_max=1e-3, delta_min=-0.1,
                                              delta_max=-0.05))
    assert np.all(weak.p(1) >= 0.999)


def test_failed_nodes_become_nan(monkeypatch):
    def boom(*args, **kwargs):
        raise ValueError("integration failed")

    monkeypatch.setattr(scan, "simulate_transfer", boom)
    m = run_transfer_map(ScanConfig(**SMALL))
    assert np.all(np.isnan(m.populations)) and np.all(np.isnan(m.norm_drift))


def test_map_symmetry_under_T():
    base = dict(mode="map", omega0_min=0.2, omega0_max=2.0, omega0_count=10, delta_min=-2.0,
                delta_max=1.0, delta_count=10)
    seq2 = run_transfer_map(ScanConfig(sequence=2, **base))
    image = run_transfer_map(ScanConfig(sequence=1, restriction="delta2_eq_delta1_plus_2delta",
                                        **base))
    assert np.max(np.abs(seq2.populations - image.populations)) <= 1e-4


def test_map_round_trip(tmp_path):
    m = run_transfer_map(ScanConfig(**SMALL))
    m.populations[0, 0] = np.nan
    path = tmp_path / "m.csv"
    write_map_csv(path, m)
    assert path.read_text().splitlines()[1] == "omega0_over_delta,delta_over_delta,p1,p2,p3,norm_drift"
    assert read_map_csv(path) == m


def test_surface_dump_and_round_trip(tmp_path):
    out = tmp_path / "s.csv"
    cfg = ScanConfig(mode="surface", delta1=-0.05, surface_max=0.3, surface_count=31, n_modes=6,
                     output=str(out))
    surf = run_surface_dump(cfg)
    back, meta = read_surface_csv(out)
    assert np.array_equal(back.values, surf.values) and back.labels == surf.labels
    assert np.array_equal(back.omega1, surf.omega1) and back.n_modes == surf.n_modes
    assert np.array_equal(back.flagged, surf.flagged)
    assert meta["config"]["delta1"] == -0.05
    # first conical intersection on the omega1 = 0 axis near omega2 = 0.1265
    col = back.sheet(FloquetLabel(1, 0, 0))[:, 0] - back.sheet(FloquetLabel(2, -1, 0))[:, 0]
    i = np.flatnonzero(np.diff(np.sign(col)))[0]
    assert back.omega2[i] <= 0.1265 <= back.omega2[i + 1]
    # and on the omega2 = 0 axis near omega1 = 0.164
    row = back.sheet(FloquetLabel(2, -1, 0))[0] - back.sheet(FloquetLabel(3, -1, -1))[0]
    i = np.flatnonzero(np.diff(np.sign(row)))[0]
    assert back.omega1[i] <= 0.164 <= back.omega1[i + 1]
    write_surface_csv(tmp_path / "t.csv", back, meta)
    assert read_surface_csv(tmp_path / "t.csv")[0].values.tobytes() == surf.values.tobytes()


def test_surface_one_omega2_photon_crossing():
    cfg = ScanConfig(mode="surface", delta1=-0.9, surface_max=0.6, surface_count=25, n_modes=6)
    surf = run_surface_dump(cfg)
    row = surf.sheet(FloquetLabel(1, 0, 0))[0] - surf.sheet(FloquetLabel(2, 0, -1))[0]
    assert np.any(np.diff(np.sign(row)) != 0)


def test_boundaries_and_round_trip(tmp_path):
    out = tmp_path / "b.csv"
    curves = run_boundary_overlays(ScanConfig(mode="boundaries", output=str(out)))
    ids = {c.id for c in curves}
    assert len(ids) >= 8
    assert {"line_delta_eq_minus_delta", "line_delta_eq_minus_half_delta"} <= ids
    back, meta = read_boundaries_csv(out)
    assert back == curves
    assert meta["kind"] == "boundaries"
    write_boundaries_csv(tmp_path / "c.csv", back, meta)
    assert (tmp_path / "c.csv").read_text() == out.read_text()


def test_simulation_reports(tmp_path):
    rep = run_simulation(ScanConfig(mode="simulate", delta1=-0.05, omega0=0.35))
    assert rep["rwa"]["populations"][1] >= 0.9
    assert rep["predicted_label"] == "|2;-1,0>" and rep["regime"] == "A"
    assert rep["t_invariance_max_difference"] < 1e-4
    rep = run_simulation(ScanConfig(mode="simulate", delta1=-1.4, omega0=1.5))
    assert rep["predicted_label"] == "|2;1,-2>" and rep["regime"] == "D_prime"
    out = tmp_path / "r.json"
    rep = run_simulation(ScanConfig(mode="simulate", delta1=-0.05, omega0=0.0, output=str(out)))
    assert rep["rwa"]["populations"] == [1.0, 0.0, 0.0]
    assert rep["predicted_label"] == "|1;0,0>"
    assert read_json(out) == rep


def test_simulation_with_full_model():
    rep = run_simulation(ScanConfig(mode="simulate", delta1=-0.05, omega0=0.35, beta_z=60.0))
    assert rep["full"]["max_difference_to_rwa"] < 0.05
    assert rep["full"]["singlet_max_population"] == 0.0


def test_classification_report(tmp_path):
    rep = run_classification(ScanConfig(mode="classify", delta1=-1.4, omega0=1.5))
    assert rep["regime"] == "D_prime" and rep["weak_field_regime"] == "D"
    write_json(tmp_path / "c.json", rep)
    assert read_json(tmp_path / "c.json") == rep
