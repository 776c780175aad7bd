import math

import numpy as np
import pytest

from decolab.errors import DomainError
from decolab.langevin_sde import (
    SdeParams,
    run_ensemble,
    step_nonrwa,
    step_rwa,
    theta_for_occupation,
    trajectory_rng,
)


def test_single_step_drift_arithmetic():
    p = SdeParams(gamma=0.01, theta=0.0, dt=1e-3)
    out = step_rwa(1.0 + 0.0j, 1e-3, 0.0, p)
    assert out == pytest.approx(1.0 - (0.01 + 1.0j) * 1e-3, rel=1e-14)


def test_substitute_reduces_to_rwa_without_counter_rotating_term():
    p = SdeParams(gamma=0.02, theta=0.0, dt=1e-3)
    for a in (0.7 + 0.3j, -1.2 + 2.0j, 3.0 - 0.5j):
        diff = step_nonrwa(a, a, 1e-3, 0.0, p, "substitute") - step_rwa(a, 1e-3, 0.0, p)
        assert diff == pytest.approx(-p.gamma * np.conj(a) ** 3 * 1e-3, rel=1e-12)


def test_blowup_guard():
    p = SdeParams(gamma=0.01, theta=0.0, dt=1e-3)
    with pytest.raises(OverflowError):
        step_rwa(2e6 + 0.0j, 1e-3, 0.0, p)
    with pytest.raises(OverflowError):
        step_nonrwa(2e6 + 0.0j, 0.0, 1e-3, 0.0, p)


def test_theta_matching():
    # theta = 2/ln(1 + 1/nbar); nbar = 3 -> 2/ln(4/3)
    assert theta_for_occupation(3.0) == pytest.approx(2.0 / math.log(4.0 / 3.0), rel=1e-12)
    with pytest.raises(DomainError):
        theta_for_occupation(0.0)


def test_param_validation():
    with pytest.raises(DomainError):
        SdeParams(gamma=-0.1, theta=0.0, dt=1e-3)
    with pytest.raises(DomainError):
        SdeParams(gamma=0.1, theta=0.0, dt=1e-3, scheme="rk4")
    with pytest.raises(DomainError):
        SdeParams(gamma=0.1, theta=0.0, dt=0.0)


def test_free_rotation_amplitude_drift():
    # plain Euler: | |a| - |a0| | < 1e-3 after one period at dt = 1e-4
    dt = 1e-4
    t_max = round(2.0 * math.pi / dt) * dt
    p = SdeParams(gamma=0.0, theta=0.0, dt=dt, n_traj=1, seed=1)
    ens = run_ensemble(1.0, p, "rwa", t_max=t_max, snap_stride=t_max)
    assert abs(abs(ens.mean_a[-1]) - 1.0) < 1e-3


def test_zero_temperature_energy_law():
    # |a(t)|^2 = |a0|^2 / (1 + 2 g t |a0|^2) within 0.1%
    p = SdeParams(gamma=0.003, theta=0.0, dt=1e-4, n_traj=1, seed=1)
    ens = run_ensemble(4.0, p, "rwa", t_max=5.0, snap_stride=0.5)
    predicted = 16.0 / (1.0 + 2.0 * 0.003 * ens.times * 16.0)
    assert np.max(np.abs(ens.mean_abs2 - predicted) / predicted) < 1e-3
    assert np.all(ens.stderr_a == 0.0)
    assert np.all(ens.stderr_abs2 == 0.0)
    assert ens.n_discarded == 0


def test_deterministic_replay():
    p = SdeParams(gamma=0.005, theta=4.0, dt=1e-3, n_traj=64, seed=77)
    e1 = run_ensemble(2.0, p, "rwa", t_max=5.0, snap_stride=0.5)
    e2 = run_ensemble(2.0, p, "rwa", t_max=5.0, snap_stride=0.5)
    assert np.array_equal(e1.mean_a, e2.mean_a)
    assert np.array_equal(e1.mean_abs2, e2.mean_abs2)
    assert np.array_equal(e1.stderr_abs2, e2.stderr_abs2)


def test_trajectory_streams_are_stateless_and_distinct():
    g0a = trajectory_rng(42, 0).standard_normal(8)
    g0b = trajectory_rng(42, 0).standard_normal(8)
    g1 = trajectory_rng(42, 1).standard_normal(8)
    assert np.array_equal(g0a, g0b)
    assert not np.array_equal(g0a, g1)


def test_noise_calibration():
    # variance of sum of sqrt(2 g theta) dW over tau = 1 equals 2 g theta
    gamma, theta, dt, n = 0.01, 5.0, 1e-3, 4000
    steps = round(1.0 / dt)
    samples = np.empty(n)
    for k in range(n):
        dw = trajectory_rng(9, k).standard_normal(steps) * math.sqrt(dt)
        samples[k] = math.sqrt(2.0 * gamma * theta) * dw.sum()
    var = samples.var(ddof=1)
    expected = 2.0 * gamma * theta
    stderr = expected * math.sqrt(2.0 / (n - 1))
    assert abs(var - expected) < 3.0 * stderr


def test_stderr_scaling_with_ensemble_size():
    base = dict(gamma=0.005, theta=4.0, dt=1e-3)
    e1 = run_ensemble(2.0, SdeParams(n_traj=400, seed=5, **base), "rwa", t_max=5.0, snap_stride=5.0)
    e2 = run_ensemble(2.0, SdeParams(n_traj=800, seed=5, **base), "rwa", t_max=5.0, snap_stride=5.0)
    ratio = e1.stderr_abs2[-1] / e2.stderr_abs2[-1]
    assert ratio == pytest.approx(math.sqrt(2.0), rel=0.2)


def test_substitute_vs_lag1_agree():
    base = dict(gamma=0.003, theta=theta_for_occupation(3.0), dt=2e-4, n_traj=400, seed=13)
    e_sub = run_ensemble(
        3.0, SdeParams(nonrwa_mode="substitute", **base), "nonrwa", t_max=20.0, snap_stride=2.0
    )
    e_lag = run_ensemble(
        3.0, SdeParams(nonrwa_mode="lag1", **base), "nonrwa", t_max=20.0, snap_stride=2.0
    )
    for i in range(len(e_sub.times)):
        tol = 2.0 * (e_sub.stderr_a[i] + e_lag.stderr_a[i]) + 1e-3
        assert abs(e_sub.mean_a[i] - e_lag.mean_a[i]) < tol


def test_heun_scheme_runs_and_matches_deterministic_limit():
    # theta = 0: Heun is 2nd-order deterministic; amplitude drift tiny
    dt = 1e-3
    t_max = round(2.0 * math.pi / dt) * dt
    p = SdeParams(gamma=0.0, theta=0.0, dt=dt, n_traj=1, seed=1, scheme="heun")
    ens = run_ensemble(1.0, p, "rwa", t_max=t_max, snap_stride=t_max)
    assert abs(abs(ens.mean_a[-1]) - 1.0) < 1e-6


def test_heun_equipartition_plateau():
    # Stratonovich reading settles at |a|^2 = theta (classical equipartition)
    theta = 3.0
    p = SdeParams(gamma=0.02, theta=theta, dt=5e-4, n_traj=1500, seed=21, scheme="heun")
    ens = run_ensemble(3.0, p, "rwa", t_max=80.0, snap_stride=2.0)
    late = ens.mean_abs2[ens.times >= 50.0]
    late_err = ens.stderr_abs2[ens.times >= 50.0]
    assert abs(late.mean() - theta) < 4.0 * late_err.mean()


def test_rwa_vs_nonrwa_envelopes_close():
    # common seed: discretization noise cancels in the comparison
    theta = theta_for_occupation(3.0)
    base = dict(gamma=0.003, theta=theta, dt=5e-4, n_traj=500, seed=31, scheme="heun")
    e_r = run_ensemble(4.0, SdeParams(**base), "rwa", t_max=40.0, snap_stride=1.0)
    e_n = run_ensemble(4.0, SdeParams(**base), "nonrwa", t_max=40.0, snap_stride=1.0)
    diff = np.abs(np.abs(e_r.mean_a) - np.abs(e_n.mean_a)) / 4.0
    assert diff.max() < 0.05
