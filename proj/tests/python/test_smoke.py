import json
import math

import numpy as np
import pytest

import latfront

ODD_H = 1.0 / 21.0


def test_defaults_and_validation():
    cfg, errors = latfront.validate({"model": {"family": "nagumo"}, "grid": {}}, "solve-wave")
    assert errors == []
    assert cfg["grid"]["h"] == 0.05
    assert latfront.default_config()["solver"]["tol"] == 1e-10

    cfg, errors = latfront.validate({"model": {"family": "nagumo"}, "grid": {"h": 0.3}}, "solve-wave")
    assert cfg is None
    assert any("grid.h" in e for e in errors)


def test_solve_wave():
    sol = latfront.solve_wave({"model": {"family": "scaled_nagumo", "eps": 0.05}, "grid": {}})
    assert abs(sol["c"] - math.sqrt(0.5) * 0.4) <= 2e-2
    assert sol["residual_norm"] <= 1e-10
    assert sol["kernel"]["kernel_dim_estimate"] == 1
    profile = sol["profile"][:, 0]
    assert sol["xi"].shape == profile.shape
    assert np.all(np.diff(profile) >= -1e-8)


def test_errors_raise():
    with pytest.raises(latfront.LatfrontError, match="grid"):
        latfront.solve_wave({"model": {"family": "nagumo"}})


def test_tails_and_simulation_agree_with_the_wave():
    cfg = {"model": {"family": "nagumo"}, "grid": {}}
    t = latfront.tails(cfg)
    assert t["lambda0"] > 0 > t["lambda1"]
    assert abs(t["fit"]["minus"]["rate"] / t["lambda0"] - 1) <= 0.05
    s = latfront.simulate({"model": {"family": "nagumo"}, "sim": {}})
    assert abs(s["c"] - t["c"]) <= 1e-2


def test_fixed_point_and_continuation():
    fp = latfront.fixed_point(
        {"model": {"family": "nagumo", "d2": 0.1}, "grid": {"h": ODD_H}, "fixedpoint": {"eps": 0.05}}
    )
    assert fp["contraction_ratio"] < 1
    br = latfront.continue_branch(
        {"model": {"family": "nagumo", "d2": 0.1}, "grid": {"h": ODD_H}, "continuation": {"to": 0.2}}
    )
    assert br["stop_reason"] == "reached_target"
    assert len(br["profiles"]) == len(br["steps"])


def test_closed_forms():
    states = latfront.two_periodic_equilibria(-0.05, 0.5)
    x = (1 + math.sqrt(1.8)) / 2
    assert any(abs(s[0] - x) < 1e-10 and abs(s[1] - (1 - x)) < 1e-10 for s in states)
    u0 = latfront.upsilon_two_site(0.3, 0.7, 0.2, 0.5, 0.4, 0.9, 0.8, 0.0)
    assert abs(u0 - (2 * 0.3 * 0.9 + 2 * 0.7 * 0.4 + 0.4 * 0.9)) < 1e-14
    lam, v = latfront.principal_eigenpair(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert lam == pytest.approx(3.0)
    assert np.all(v > 0)


def test_cli_in_process(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"model": {"family": "four_site", "d1": 0, "d2": 1, "a": 0.3}, "grid": {}}))
    code, out, err = latfront.run("solve-wave", "-c", cfg, "-o", tmp_path / "out")
    assert code == 5
    assert json.loads(err)["kernel_dim_estimate"] == 2
