import json
import math

import numpy as np
import pytest

import acons


def test_ring_laplacian_spectrum():
    eig = np.linalg.eigvalsh(acons.Topology.ring(6).laplacian())
    np.testing.assert_allclose(eig, [0, 1, 1, 3, 3, 4], atol=1e-12)


def test_two_node_subsystem():
    matrix, spectrum = acons.subsystem_matrix(acons.Topology.path(2), [1.0, 0.0])
    np.testing.assert_allclose(matrix, [[-0.5, -0.5, 0], [-0.5, -2.5, -1], [0, 4, 0]], atol=1e-14)
    np.testing.assert_allclose(np.poly(matrix), [1, 3, 5, 2], atol=1e-12)
    assert acons.is_hurwitz(matrix)
    assert max(z.real for z in spectrum) < 0


def test_eigenvalues_and_expm_match_numpy():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(6, 6))
    ours = sorted(acons.eigenvalues(a), key=lambda z: (z.real, z.imag))
    ref = sorted(np.linalg.eigvals(a), key=lambda z: (z.real, z.imag))
    np.testing.assert_allclose(ours, ref, atol=1e-10)
    d = np.diag([0.5, -1.0])
    np.testing.assert_allclose(acons.expm(d, 2.0), np.diag(np.exp([1.0, -2.0])), rtol=1e-14)


def test_stable_step_boundary():
    topology = acons.Topology.path(2)
    patterns = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    d_bar = acons.max_stable_step(topology, patterns)
    matrix, _ = acons.subsystem_matrix(topology, patterns[0])
    eye = np.eye(3)
    assert acons.is_schur(eye + 0.9 * d_bar * matrix)
    assert not acons.is_schur(eye + 1.1 * d_bar * matrix)


def test_ct_run_conserves_and_converges():
    topology = acons.Topology.ring(4)
    schedule = acons.ModeSchedule([(0.0, [1, 0, 1, 0]), (5.0, [0, 1, 1, 1])], 40.0)
    signals = [acons.ReferenceSignal.constant(v) for v in (1.0, 2.0, 3.0, 4.0)]
    tr = acons.integrate(topology, schedule, signals, np.zeros(4), np.ones(4), 40.0, 0.01)
    assert tr["x"].shape == (len(tr["times"]), 4)
    assert abs(tr["v"][-1].sum() - 4.0) < 1e-9
    assert tr["error"][-1].max() < 1e-6
    assert abs(tr["average"][-1] - 3.0) < 1e-12
    assert sum(tr["left_limit"]) == 1


def test_dt_one_step():
    tr = acons.simulate_dt(acons.Topology.path(2), acons.ModeSchedule([(0.0, [1, 1])], 1.0),
                           [acons.ReferenceSignal.constant(0.0), acons.ReferenceSignal.constant(2.0)],
                           [0.0, 2.0], [0.0, 0.0], 0.1, 0.1, 1)
    np.testing.assert_allclose(tr["x"][1], [0.2, 1.8], atol=1e-15)


def test_geometry():
    hull = acons.hull_2d(np.array([[0, 0], [4, 0], [0, 4], [1, 1]], dtype=float))
    assert hull.shape == (3, 2)
    x = acons.nested_centroid(np.array([[0, 0], [4, 0], [0, 4]], dtype=float), [[0, 1], [1, 2]])
    np.testing.assert_allclose(x, [2, 1])
    assert acons.contains(hull, x)
    assert not acons.contains(hull, [3.0, 3.0], 1e-9)


def test_invalid_input_maps_to_value_error():
    with pytest.raises(ValueError):
        acons.Topology(np.zeros((3, 3)))
    with pytest.raises(acons.InvalidInput, match="/schedule/epochs/0/weights"):
        acons.load_config({"schema_version": 1, "topology": {"generator": "ring", "n": 3},
                           "schedule": {"horizon": 1, "epochs": [{"start": 0, "weights": [0, 0, 0]}]}})


def test_config_round_trip():
    config = acons.demo_config("fig2")
    assert acons.load_config(config) == config
    assert acons.load_config(json.dumps(config)) == config


def test_commands(tmp_path):
    config = acons.demo_config("fig2")
    result = acons.analyze(config, tmp_path / "analyze")
    assert result.ok and result.report["all_hurwitz"]
    assert result.report["d_bar"] > 0

    fig4 = acons.demo("fig4", tmp_path / "fig4")
    assert fig4.ok
    assert fig4.report["target_violations"] == 0
    assert (tmp_path / "fig4" / "containment.csv").exists()

    small = {"schema_version": 1, "topology": {"generator": "path", "n": 3},
             "schedule": {"horizon": 5, "epochs": [{"start": 0, "weights": [1, 0, 1]}]},
             "signals": [{"kind": "constant", "value": v} for v in (1, 2, 3)],
             "rates": {"h": 0.01, "delta_c": 0.1, "delta_s": 0.1}}
    a = acons.simulate(small, "dt", tmp_path / "a")
    b = acons.simulate(small, "dt", tmp_path / "b")
    assert a.ok and b.ok
    assert (tmp_path / "a" / "trajectory.csv").read_bytes() == (tmp_path / "b" / "trajectory.csv").read_bytes()
    assert math.isfinite(a.report["final_error"])
