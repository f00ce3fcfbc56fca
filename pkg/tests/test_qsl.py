import numpy as np
import pytest

from wigner_qsl.dynamics import FrequencyProtocol, QbmParams, qbm_evolve, qbm_rhs, solve_aux_ode
from wigner_qsl.errors import ArgumentError, RangeError
from wigner_qsl.experiments import run_fig1_experiment
from wigner_qsl.grids import PhaseGrid, UniformGrid1D
from wigner_qsl.metrics import wasserstein_norm
from wigner_qsl.qsl import (
    SpeedSeries,
    kernel_rate,
    normalize_series,
    tau_qsl_w,
    v_qsl,
    v_qsl_w,
    wigner_rate,
)
from wigner_qsl.states import GaussianSpec, OscillatorParams, gaussian_wigner, parametric_kernel
from wigner_qsl.transforms import reciprocal_phase_grid, wigner_transform


@pytest.fixture(scope="module")
def stationary_kernels(xgrid64):
    params = OscillatorParams(omega0=1.0, omega1=1.0)
    traj = solve_aux_ode(FrequencyProtocol(1.0, 1.0, 1.0), 1.0 / 2000)
    ts = np.linspace(0.0, 1.0, 11)
    return [parametric_kernel(params, traj, t, xgrid64) for t in ts]


def test_stationary_rate_is_zero(stationary_kernels, xgrid64):
    assert v_qsl(stationary_kernels, 0.5, 0.1, 1) < 1e-6
    assert v_qsl(stationary_kernels, 0.0, 0.1, 1) < 1e-6  # one-sided end
    assert v_qsl(stationary_kernels, 1.0, 0.1, 1) < 1e-6


def test_missing_snapshot_raises(stationary_kernels):
    with pytest.raises(RangeError):
        kernel_rate(stationary_kernels, 0.55, 0.1)
    with pytest.raises(RangeError):
        kernel_rate(stationary_kernels, 0.5, 0.07)


def test_rate_refinement_is_second_order(params, xgrid64):
    tau = 1.0
    traj = solve_aux_ode(FrequencyProtocol(1.0, 2.0, tau), tau / 8000)
    t = 0.5

    def rate_norm(dt):
        ks = [parametric_kernel(params, traj, s, xgrid64) for s in (t - dt, t, t + dt)]
        return v_qsl(ks, t, dt, 1)

    exact = rate_norm(1e-4)
    err_coarse = abs(rate_norm(0.02) - exact)
    err_fine = abs(rate_norm(0.01) - exact)
    assert err_fine < err_coarse / 3.0


def test_phase_space_rate_matches_generator():
    # matched times: central difference of snapshots vs the analytic
    # right-hand side evaluated at the middle snapshot
    qbm = QbmParams(gamma=2.0, beta=1.0)
    axis = UniformGrid1D(-10.0, 10.0, 129)
    grid = PhaseGrid(axis, axis)
    w0 = gaussian_wigner(GaussianSpec(2.0, 0.5, 0.0, 0.5), grid)
    snaps = qbm_evolve(w0, qbm, 0.02, dt=1e-4, snapshot_stride=1)
    mid = len(snaps) // 2
    dt = snaps[1].time - snaps[0].time
    fd = wigner_rate(snaps, snaps[mid].time, dt)
    gen = qbm_rhs(snaps[mid], qbm)
    assert wasserstein_norm(fd - gen, grid, 1) < 1e-4


def test_fig1_argmax_agrees_across_representations(params):
    rep = run_fig1_experiment(params, tau=0.1, grid_n=64, steps=50)
    op = rep.series["v_qsl_p1"].values
    ph = rep.series["v_qsl_w_p1"].values
    assert abs(int(np.argmax(op)) - int(np.argmax(ph))) <= 1


def test_fig1_speed_monotone_in_p(params):
    rep = run_fig1_experiment(params, tau=1.0, grid_n=64, steps=40)
    v1 = rep.series["v_qsl_p1"].values
    v2 = rep.series["v_qsl_p2"].values
    vinf = rep.series["v_qsl_pinf"].values
    assert np.all(v1 >= v2 * (1 - 1e-10))
    assert np.all(v2 >= vinf * (1 - 1e-10))
    assert rep.checks.ok, rep.checks.describe()


def test_constant_protocol_run_is_stationary():
    params = OscillatorParams(omega0=1.0, omega1=1.0)
    rep = run_fig1_experiment(params, tau=1.0, grid_n=64, steps=40)
    assert rep.stationary
    assert rep.series["v_qsl_p1"].values.max() < 1e-6
    assert rep.series["v_qsl_w_p1"].values.max() < 1e-6
    assert rep.checks.ok


def test_tau_qsl_w_trivials():
    times = np.linspace(0.0, 2.0, 21)
    d = SpeedSeries(times, np.zeros_like(times), "distance")
    v = SpeedSeries(times, np.full_like(times, 3.0), "speed")
    assert tau_qsl_w(d, v, 2.0) == 0.0
    d2 = SpeedSeries(times, np.linspace(0.0, 1.0, 21), "distance")
    base = tau_qsl_w(d2, v, 2.0)
    doubled = tau_qsl_w(d2, SpeedSeries(times, 2 * v.values, "speed"), 2.0)
    assert doubled == pytest.approx(base / 2.0, rel=1e-12)
    with pytest.raises(ArgumentError):
        tau_qsl_w(d2, SpeedSeries(times, np.zeros_like(times), "speed"), 2.0)


def test_normalize_series():
    times = np.linspace(0.0, 1.0, 5)
    s = SpeedSeries(times, np.full(5, 0.7), "flat")
    out = normalize_series(s)
    assert np.all(out.values == 1.0)
    peaked = normalize_series(SpeedSeries(times, np.array([0.1, 0.4, 0.2, 0.4, 0.3]), "s"))
    assert peaked.values.max() == 1.0
    with pytest.raises(ArgumentError):
        normalize_series(SpeedSeries(times, np.zeros(5), "zero"))


def test_speed_series_invariants():
    times = np.linspace(0.0, 1.0, 5)
    with pytest.raises(ArgumentError):
        SpeedSeries(times, -np.ones(5), "negative")
    with pytest.raises(ArgumentError):
        SpeedSeries(times[::-1].copy(), np.ones(5), "backwards")


def test_v_qsl_w_matches_norm_of_rate(params, xgrid64):
    traj = solve_aux_ode(FrequencyProtocol(1.0, 2.0, 1.0), 1.0 / 8000)
    pgrid = reciprocal_phase_grid(xgrid64, params.hbar)
    ts = [0.4, 0.5, 0.6]
    fields = [
        wigner_transform(parametric_kernel(params, traj, t, xgrid64), pgrid, params.hbar)
        for t in ts
    ]
    direct = v_qsl_w(fields, 0.5, 0.1, 1)
    rate = wigner_rate(fields, 0.5, 0.1)
    assert direct == pytest.approx(wasserstein_norm(rate, pgrid, 1), rel=1e-12)
