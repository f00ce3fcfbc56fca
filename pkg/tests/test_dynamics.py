import math

import numpy as np
import pytest

from wigner_qsl.dynamics import (
    AuxTrajectory,
    FrequencyProtocol,
    QbmParams,
    boundary_amplitude,
    qbm_evolve,
    qbm_rhs,
    qbm_stable_dt,
    solve_aux_ode,
)
from wigner_qsl.errors import AccuracyError, ArgumentError, DomainError, StabilityError
from wigner_qsl.grids import PhaseGrid, UniformGrid1D, integrate_2d
from wigner_qsl.metrics import wasserstein_norm
from wigner_qsl.states import GaussianSpec, WignerField, gaussian_wigner


def symmetric_grid(half, n):
    axis = UniformGrid1D(-half, half, n)
    return PhaseGrid(axis, axis)


def gibbs_state(grid, beta, M=1.0, omega0=1.0, mu_x=0.0):
    X, P = grid.meshes()
    w = np.exp(-beta * (P**2 / (2 * M) + 0.5 * M * omega0**2 * (X - mu_x) ** 2))
    w *= beta * omega0 / (2 * np.pi)
    return WignerField(grid, w)


# ---------------------------------------------------------------------------
# auxiliary classical ODE


def test_constant_frequency_closed_form():
    traj = solve_aux_ode(FrequencyProtocol(1.0, 1.0, math.pi), math.pi / 8000)
    X, dX, Y, dY = traj.interp(math.pi / 2)
    assert X == pytest.approx(1.0, abs=1e-9)
    assert Y == pytest.approx(0.0, abs=1e-9)


def test_constant_frequency_omega2():
    traj = solve_aux_ode(FrequencyProtocol(2.0, 2.0, 2.0), 2.0 / 8000)
    X, _, _, _ = traj.interp(1.0)
    assert X == pytest.approx(math.sin(2.0) / 2.0, abs=1e-8)


@pytest.mark.parametrize("tau", [0.1, 1.0, 5.0, 10.0])
def test_wronskian_conserved_for_quench(tau):
    traj = solve_aux_ode(FrequencyProtocol(1.0, 2.0, tau), tau / 8000)
    assert traj.wronskian_drift() < 1e-8


def test_interp_between_nodes_is_smooth():
    traj = solve_aux_ode(FrequencyProtocol(1.0, 1.0, 1.0), 1.0 / 500)
    t = 0.31415926
    X, dX, Y, dY = traj.interp(t)
    assert X == pytest.approx(math.sin(t), abs=1e-9)
    assert dX == pytest.approx(math.cos(t), abs=1e-7)
    assert Y == pytest.approx(math.cos(t), abs=1e-9)
    assert dY == pytest.approx(-math.sin(t), abs=1e-7)


def test_step_size_validation():
    with pytest.raises(ArgumentError):
        solve_aux_ode(FrequencyProtocol(1.0, 2.0, 1.0), 0.02)  # > tau/100
    with pytest.raises(ArgumentError):
        solve_aux_ode(FrequencyProtocol(1.0, 2.0, 1.0), -1e-3)


def test_coarse_step_on_violent_quench_raises_accuracy_error():
    with pytest.raises(AccuracyError):
        solve_aux_ode(FrequencyProtocol(1.0, 200.0, 1.0), 1.0 / 100)


def test_trajectory_boundary_conditions_enforced():
    t = np.linspace(0.0, 1.0, 11)
    with pytest.raises(ArgumentError):
        AuxTrajectory(t, np.ones(11), np.ones(11), np.ones(11), np.zeros(11))


def test_interp_outside_range_raises():
    traj = solve_aux_ode(FrequencyProtocol(1.0, 1.0, 1.0), 1e-3)
    from wigner_qsl.errors import RangeError

    with pytest.raises(RangeError):
        traj.interp(1.5)


# ---------------------------------------------------------------------------
# bath parameters


def test_diffusion_constant_formulas():
    qbm = QbmParams(gamma=2.0, beta=1.0, M=1.0, hbar=1.0, omega0=1.0)
    assert qbm.d_pp == pytest.approx(2.0 - 0.5)
    assert qbm.d_xp == pytest.approx(1.0 / 6.0)
    closed = QbmParams(gamma=0.0, beta=1.0)
    assert closed.d_pp == 0.0 and closed.d_xp == 0.0


def test_negative_diffusion_warns_and_refuses():
    with pytest.warns(UserWarning, match="negative"):
        qbm = QbmParams(gamma=2.0, beta=10.0)
    assert qbm.d_pp == pytest.approx(-4.8)
    grid = symmetric_grid(10.0, 65)
    w0 = gaussian_wigner(GaussianSpec(0.0, 1.0, 0.0, 1.0), grid)
    with pytest.raises(StabilityError):
        qbm_evolve(w0, qbm, 1.0)


def test_invalid_bath_params_rejected():
    with pytest.raises(ArgumentError):
        QbmParams(gamma=-1.0, beta=1.0)
    with pytest.raises(ArgumentError):
        QbmParams(gamma=1.0, beta=0.0)


# ---------------------------------------------------------------------------
# master-equation right-hand side


def test_rhs_integrates_to_zero():
    grid = symmetric_grid(12.0, 129)
    w = gaussian_wigner(GaussianSpec(1.0, 0.8, -0.5, 0.7), grid)
    rhs = qbm_rhs(w, QbmParams(gamma=2.0, beta=1.0))
    assert abs(integrate_2d(rhs, grid)) < 1e-8


def test_high_temperature_gibbs_is_stationary():
    beta = 0.01
    grid = symmetric_grid(66.0, 529)  # spacing 0.25
    qbm = QbmParams(gamma=2.0, beta=beta)
    resid = wasserstein_norm(qbm_rhs(gibbs_state(grid, beta), qbm), grid, 1)
    moved = wasserstein_norm(qbm_rhs(gibbs_state(grid, beta, mu_x=5.0), qbm), grid, 1)
    assert resid / moved < 1e-3


def test_closed_oscillator_rhs_is_second_order_small():
    # The continuum Liouville bracket vanishes on the matching ground-state
    # field; what remains is pure stencil truncation, which must shrink at
    # 2nd order and stay far below a displaced state's rate.
    qbm = QbmParams(gamma=0.0, beta=1.0)

    def residual(n):
        grid = symmetric_grid(10.0, n)
        X, P = grid.meshes()
        w = WignerField(grid, np.exp(-(X**2) - P**2) / np.pi)
        return wasserstein_norm(qbm_rhs(w, qbm), grid, 1), grid

    r129, _ = residual(129)
    r257, grid = residual(257)
    assert r257 < r129 / 3.5
    X, P = grid.meshes()
    displaced = WignerField(grid, np.exp(-((X - 2.0) ** 2) - P**2) / np.pi)
    moved = wasserstein_norm(qbm_rhs(displaced, qbm), grid, 1)
    assert r257 / moved < 1e-2


def test_rhs_boundary_gate():
    grid = symmetric_grid(3.0, 65)
    X, P = grid.meshes()
    wide = np.exp(-(X**2 + P**2) / 8.0)
    wide /= integrate_2d(wide, grid)
    w = WignerField(grid, wide)
    assert boundary_amplitude(w.values) > 1e-8
    with pytest.raises(DomainError):
        qbm_rhs(w, QbmParams(gamma=1.0, beta=1.0))


# ---------------------------------------------------------------------------
# evolution


def test_zero_time_returns_initial_state():
    grid = symmetric_grid(10.0, 65)
    w0 = gaussian_wigner(GaussianSpec(1.0, 0.8, 0.0, 0.8), grid)
    snaps = qbm_evolve(w0, QbmParams(gamma=1.0, beta=1.0), 0.0)
    assert len(snaps) == 1 and snaps[0] is w0


def test_negative_time_rejected():
    grid = symmetric_grid(10.0, 65)
    w0 = gaussian_wigner(GaussianSpec(1.0, 0.8, 0.0, 0.8), grid)
    with pytest.raises(ArgumentError, match="t_final must be positive"):
        qbm_evolve(w0, QbmParams(gamma=1.0, beta=1.0), -1.0)


def test_unstable_explicit_step_raises():
    grid = symmetric_grid(10.0, 129)
    w0 = gaussian_wigner(GaussianSpec(1.0, 0.6, 0.0, 0.6), grid)
    qbm = QbmParams(gamma=2.0, beta=0.1)
    bad_dt = 25 * qbm_stable_dt(grid, qbm)
    with pytest.raises(StabilityError, match="dt"):
        qbm_evolve(w0, qbm, 0.5, dt=bad_dt)


def test_evolution_conserves_normalization():
    grid = symmetric_grid(10.0, 129)
    w0 = gaussian_wigner(GaussianSpec(2.0, 0.5, 0.0, 0.5), grid)
    snaps = qbm_evolve(w0, QbmParams(gamma=2.0, beta=1.0), 1.0)
    norms = np.array([s.normalization for s in snaps])
    assert np.abs(norms - 1.0).max() < 1e-5


def test_gibbs_state_stays_put_under_evolution():
    beta = 0.01
    grid = symmetric_grid(66.0, 265)  # spacing ~0.5
    qbm = QbmParams(gamma=2.0, beta=beta)
    w0 = gibbs_state(grid, beta)
    snaps = qbm_evolve(w0, qbm, 0.3)
    drift = wasserstein_norm(snaps[-1].values - w0.values, grid, 1)
    assert drift < 1e-3


def test_grid_refinement_is_second_order():
    qbm = QbmParams(gamma=2.0, beta=1.0)
    spec = GaussianSpec(2.0, 0.5, 0.0, 0.5)
    t_final = 0.1
    finals = {}
    for n in (65, 129, 257):
        grid = symmetric_grid(12.0, n)
        dt = qbm_stable_dt(symmetric_grid(12.0, 257), qbm)
        w0 = gaussian_wigner(spec, grid)
        finals[n] = qbm_evolve(w0, qbm, t_final, dt=dt, snapshot_stride=10**9)[-1]
    coarse_err = wasserstein_norm(
        finals[65].values - finals[129].values[::2, ::2], symmetric_grid(12.0, 65), 1
    )
    fine_err = wasserstein_norm(
        finals[129].values - finals[257].values[::2, ::2], symmetric_grid(12.0, 129), 1
    )
    assert coarse_err / fine_err > 3.0


def test_closed_dynamics_is_time_reversible():
    # Reflecting P and evolving forward realizes backward evolution; the
    # central stencils respect the reflection exactly, so the round trip
    # only sees time-integration error.
    qbm = QbmParams(gamma=0.0, beta=1.0)
    grid = symmetric_grid(10.0, 129)
    sigma = 1.0 / math.sqrt(2.0)
    w0 = gaussian_wigner(GaussianSpec(1.5, sigma, 0.0, sigma), grid)
    forward = qbm_evolve(w0, qbm, 0.5, snapshot_stride=10**9)[-1]
    reflected = WignerField(grid, forward.values[:, ::-1].copy(), time=0.0)
    back = qbm_evolve(reflected, qbm, 0.5, snapshot_stride=10**9)[-1]
    recovered = back.values[:, ::-1]
    assert wasserstein_norm(recovered - w0.values, grid, 1) < 1e-5
