import numpy as np
import pytest

import tvflow


def test_gradient_is_negative_adjoint_of_divergence():
    rng = np.random.default_rng(0)
    grid = tvflow.Grid.rectangle(5, 4, 1.0, 0.5)
    u = rng.standard_normal(grid.shape)
    z = tuple(rng.standard_normal(c.shape) for c in tvflow.gradient(u, grid))
    h0, h1 = grid.spacing
    lhs = sum(np.sum(g * c) for g, c in zip(tvflow.gradient(u, grid), z)) * h0 * h1
    rhs = -np.sum(u * tvflow.divergence(z, grid)) * h0 * h1
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_spike_prox_matches_exact_solver():
    grid = tvflow.Grid.line(3, 3.0)
    y = np.array([0.0, 3.0, 0.0])
    exact = tvflow.taut_string(y, 1.0, 3.0)
    np.testing.assert_allclose(exact, [0.0, 1.0, 0.0], atol=1e-12)
    r = tvflow.rof_prox(y, 1.0, grid, mode="anisotropic", gap_tol=1e-12, max_iters=10**6)
    assert r["converged"]
    assert r["gap"] <= 1e-12
    np.testing.assert_allclose(r["u"], exact, atol=2e-6)
    assert tvflow.duality_gap(r["u"], r["z"], y, 1.0, grid, "anisotropic") <= 1e-11


def test_total_variation_counts_boundary_jumps():
    grid = tvflow.Grid.line(3, 3.0)
    assert tvflow.total_variation(np.array([0.0, 1.0, 0.0]), grid) == pytest.approx(2.0)


def test_step_record_is_certified():
    grid = tvflow.Grid.rectangle(6, 6)
    u = np.zeros(grid.shape)
    u[2:4, 2:4] = 1.0
    r = tvflow.step(u, np.zeros(grid.shape), 0.01, grid, gap_tol=1e-9, max_iters=10**6)
    rec = r["record"]
    assert rec["converged"]
    assert rec["duality_gap"] <= 1e-9
    assert np.max(r["u"]) < 1.0


def test_shape_mismatch_raises():
    with pytest.raises(ValueError):
        tvflow.total_variation(np.zeros(4), tvflow.Grid.line(3))


def test_run_and_verify(tmp_path):
    text = "dimension = 1\nnx = 16\ntau = 0.01\nt_end = 0.05\ninitial = indicator\n"
    out = tvflow.run_config(text, tmp_path / "run")
    assert out["aborted"] is None
    assert out["failures"] == []
    assert len(out["records"]) == 5
    v = tvflow.verify(tmp_path / "run")
    assert v["failures"] == []
    assert v["steps_checked"] == 5
    u, t = tvflow.read_snapshot(tmp_path / "run" / "snapshots" / "u_000005.tvf")
    assert t == pytest.approx(0.05)
    np.testing.assert_array_equal(u, out["final_state"])


def test_config_error_names_key():
    with pytest.raises(tvflow.ConfigError, match="tau"):
        tvflow.run_config("tau = -1\n")


def test_oracle_battery():
    b = tvflow.oracle_battery(16, 5)
    assert b["instances"] == 5
    assert b["all_converged"]
    assert b["worst_error"] <= 1e-6
