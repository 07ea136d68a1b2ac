import os
from pathlib import Path

import numpy as np
import pytest

import torus_holonomy as th

CONFIGS = Path(os.environ.get("TORUS_CONFIG_DIR", Path(__file__).resolve().parents[2] / "configs"))


def test_model_layout():
    model = th.TorusModel(2, [0], [0.25, 0.5], 3)
    assert model.lattice_size == 49
    assert model.dynamic == [1]
    assert model.mode_at(model.linear_index([1, -2])) == [1, -2]
    action = th.action_operator(model, 0)
    assert action.shape == (49, 49)
    assert action[model.linear_index([2, 0]), model.linear_index([2, 0])] == pytest.approx(1.75)


def test_spectrum_levels():
    config = th.load_config(CONFIGS / "abelian_circle.json")
    levels = th.spectrum(config)["levels"]
    assert [level["multiplicity"] for level in levels] == [18, 18, 18, 18, 9]
    h = th.hamiltonian_operator(config)
    assert np.allclose(h, np.diag(np.diag(h)))


def test_holonomy_is_unitary():
    config = th.load_config(CONFIGS / "nonabelian_loop.json")
    config.steps = 200
    out = th.holonomy(config)
    u = out["matrix"]
    assert np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() < 1e-10
    assert out["diagnostics"]["unitarity_defect"] < 1e-10


def test_evolve_control_matches_abelian_holonomy():
    config = th.load_config(CONFIGS / "abelian_circle.json")
    u = th.evolve_control(config, config.steps)
    assert np.abs(u - np.diag(np.diag(u))).max() == 0.0
    assert th.holonomy(config)["diagnostics"]["abelian_phase_deviation"] <= 1e-8


def test_classical_csv():
    rows = th.classical(th.load_config(CONFIGS / "kappa_drift.json")).splitlines()
    assert rows[0] == "t,I_1,I_2,phi_1,phi_2"
    assert len(rows) == 42


def test_errors():
    with pytest.raises(th.ConfigError):
        th.parse_config('{"schema_version": 1, "model": {"m": 2,, }')
    config = th.parse_config(
        '{"schema_version": 1, "model": {"m": 1, "N": 2, "controlled": [0], "lambda": [0]},'
        ' "curve": {"type": "linear", "start": [0], "velocity": [1], "duration": 1}}'
    )
    with pytest.raises(th.PreconditionError):
        th.holonomy(config)


def test_verify_with_fault():
    config = th.load_config(CONFIGS / "kappa_drift.json")
    config.fault_injection = "lambda"
    report = th.verify(config, threads=1)
    assert not report["passed"]
    failed = {c["name"].split("[")[0] for c in report["checks"] if not c["passed"]}
    assert failed == {"lambda_shift_integer"}
