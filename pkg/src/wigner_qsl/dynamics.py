"""Time evolution: the classical auxiliary ODE behind the driven-oscillator
kernel, and finite-difference evolution of the damped oscillator's
phase-space master equation.

The master equation is

    dW/dt = [-(P/M) d_x + M w0^2 x d_P + d_P(gamma P + D_PP d_P)
             + D_xP d^2_{xP}] W

with D_PP = M*gamma/beta + M*beta*gamma*hbar^2*(w0^2 - gamma^2)/12 and
D_xP = beta*gamma*hbar^2/12.  D_PP turns negative at low temperature when
gamma > w0; evolution is refused there (negative momentum diffusion is
ill-posed) rather than regularized.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    AccuracyError,
    ArgumentError,
    DomainError,
    RangeError,
    StabilityError,
)
from .states import WignerField

WRONSKIAN_TOL = 1e-6
BOUNDARY_AMPLITUDE_TOL = 1e-8
NORM_GROWTH_LIMIT = 0.01
SNAPSHOT_NORM_TOL = 1e-5


@dataclass(frozen=True)
class FrequencyProtocol:
    """Linear quench of the squared frequency over [0, tau]."""

    omega0: float
    omega1: float
    tau: float

    def __post_init__(self):
        if not (self.omega0 > 0 and self.omega1 > 0 and self.tau > 0):
            raise ArgumentError("omega0, omega1 and tau must be positive")

    def omega_sq(self, t):
        return self.omega0**2 - (self.omega0**2 - self.omega1**2) * t / self.tau

    @property
    def is_constant(self) -> bool:
        return self.omega0 == self.omega1


@dataclass(frozen=True)
class AuxTrajectory:
    """Classical solutions X, Y of xddot + w(t)^2 x = 0 with
    X(0)=0, Xdot(0)=1, Y(0)=1, Ydot(0)=0, sampled on a uniform time grid."""

    times: np.ndarray
    X: np.ndarray
    dX: np.ndarray
    Y: np.ndarray
    dY: np.ndarray

    def __post_init__(self):
        lengths = {len(self.times), len(self.X), len(self.dX), len(self.Y), len(self.dY)}
        if len(lengths) != 1:
            raise ArgumentError("trajectory arrays must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ArgumentError("trajectory times must be strictly increasing")
        if not (self.X[0] == 0.0 and self.dX[0] == 1.0 and self.Y[0] == 1.0 and self.dY[0] == 0.0):
            raise ArgumentError("trajectory does not satisfy the initial conditions")

    def wronskian(self) -> np.ndarray:
        return self.dX * self.Y - self.X * self.dY

    def wronskian_drift(self) -> float:
        return float(np.abs(self.wronskian() - 1.0).max())

    def interp(self, t: float) -> tuple[float, float, float, float]:
        """Cubic Hermite values (X, Xdot, Y, Ydot) at time t.

        X and Y are interpolated from stored values and derivatives; their
        rates are the derivatives of those cubics.
        """
        times = self.times
        slack = 1e-9 * (times[-1] - times[0])
        if t < times[0] - slack or t > times[-1] + slack:
            raise RangeError(f"t={t} outside trajectory range [{times[0]}, {times[-1]}]")
        t = min(max(t, times[0]), times[-1])
        k = int(np.searchsorted(times, t, side="right") - 1)
        k = min(max(k, 0), len(times) - 2)
        h = times[k + 1] - times[k]
        s = (t - times[k]) / h

        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s**2 * (3 - 2 * s)
        h11 = s**2 * (s - 1)
        d00 = 6 * s * (s - 1) / h
        d10 = (3 * s - 1) * (s - 1) / h
        d01 = -6 * s * (s - 1) / h
        d11 = s * (3 * s - 2) / h

        def val(y, dy):
            return h00 * y[k] + h10 * h * dy[k] + h01 * y[k + 1] + h11 * h * dy[k + 1]

        def slope(y, dy):
            return d00 * y[k] + d10 * h * dy[k] + d01 * y[k + 1] + d11 * h * dy[k + 1]

        return (
            float(val(self.X, self.dX)),
            float(slope(self.X, self.dX)),
            float(val(self.Y, self.dY)),
            float(slope(self.Y, self.dY)),
        )


def solve_aux_ode(protocol: FrequencyProtocol, dt: float) -> AuxTrajectory:
    """RK4 integration of both auxiliary solutions over [0, tau]."""
    if not dt > 0:
        raise ArgumentError("dt must be positive")
    if dt > protocol.tau / 100:
        raise ArgumentError(f"dt={dt} too coarse; need dt <= tau/100")
    n_steps = max(100, round(protocol.tau / dt))
    dt = protocol.tau / n_steps

    def deriv(t, u):
        wsq = protocol.omega_sq(t)
        return np.array([u[1], -wsq * u[0], u[3], -wsq * u[2]])

    u = np.array([0.0, 1.0, 1.0, 0.0])
    out = np.empty((n_steps + 1, 4))
    out[0] = u
    for j in range(n_steps):
        t = j * dt
        k1 = deriv(t, u)
        k2 = deriv(t + dt / 2, u + dt / 2 * k1)
        k3 = deriv(t + dt / 2, u + dt / 2 * k2)
        k4 = deriv(t + dt, u + dt * k3)
        u = u + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[j + 1] = u

    times = np.arange(n_steps + 1) * dt
    traj = AuxTrajectory(times, out[:, 0], out[:, 1], out[:, 2], out[:, 3])
    drift = traj.wronskian_drift()
    if drift > WRONSKIAN_TOL:
        raise AccuracyError(f"Wronskian drift {drift:.3e} at dt={dt}; reduce the step")
    return traj


@dataclass(frozen=True)
class QbmParams:
    """Damped-oscillator bath parameters; beta = 1/(k_B T) with k_B = 1.

    gamma = 0 is the closed-system limit (both diffusion constants vanish).
    """

    gamma: float
    beta: float
    M: float = 1.0
    hbar: float = 1.0
    omega0: float = 1.0

    def __post_init__(self):
        if self.gamma < 0:
            raise ArgumentError("gamma must be nonnegative")
        if not (self.beta > 0 and self.M > 0 and self.hbar > 0 and self.omega0 > 0):
            raise ArgumentError("beta, M, hbar and omega0 must be positive")
        if self.d_pp < 0:
            warnings.warn(
                f"D_PP = {self.d_pp:.6g} is negative (beta={self.beta}, "
                f"gamma={self.gamma} > omega0={self.omega0}); the master equation "
                "is outside its validity regime and evolution will be refused",
                stacklevel=2,
            )

    @property
    def d_pp(self) -> float:
        return (
            self.M * self.gamma / self.beta
            + self.M * self.beta * self.gamma * self.hbar**2
            * (self.omega0**2 - self.gamma**2) / 12.0
        )

    @property
    def d_xp(self) -> float:
        return self.beta * self.gamma * self.hbar**2 / 12.0


def _ddx(W: np.ndarray, dx: float) -> np.ndarray:
    """d/dx along axis 0: central differences with zero values outside.

    The zero-ghost closure keeps the advection operators near-skew-symmetric;
    one-sided edge stencils are downwind for the friction term at the
    momentum edges and destabilize absorbing-boundary runs.
    """
    out = np.empty_like(W)
    out[1:-1] = (W[2:] - W[:-2]) / (2 * dx)
    out[0] = W[1] / (2 * dx)
    out[-1] = -W[-2] / (2 * dx)
    return out


def _ddp(W: np.ndarray, dp: float) -> np.ndarray:
    """d/dP along axis 1."""
    out = np.empty_like(W)
    out[:, 1:-1] = (W[:, 2:] - W[:, :-2]) / (2 * dp)
    out[:, 0] = W[:, 1] / (2 * dp)
    out[:, -1] = -W[:, -2] / (2 * dp)
    return out


def _d2dp(W: np.ndarray, dp: float) -> np.ndarray:
    """d^2/dP^2 along axis 1, central with zero values outside the domain."""
    out = np.empty_like(W)
    out[:, 1:-1] = (W[:, 2:] - 2 * W[:, 1:-1] + W[:, :-2]) / dp**2
    out[:, 0] = (W[:, 1] - 2 * W[:, 0]) / dp**2
    out[:, -1] = (W[:, -2] - 2 * W[:, -1]) / dp**2
    return out


class _QbmStencil:
    """Cached meshes and coefficients for the master-equation right-hand side."""

    def __init__(self, grid, params: QbmParams):
        X, P = grid.meshes()
        self.dx = grid.x.spacing
        self.dp = grid.p.spacing
        self.adv_x = -P / params.M
        self.adv_p = params.M * params.omega0**2 * X
        self.gamma_p = params.gamma * P
        self.gamma = params.gamma
        self.d_pp = params.d_pp
        self.d_xp = params.d_xp

    def apply(self, W: np.ndarray) -> np.ndarray:
        rhs = self.adv_x * _ddx(W, self.dx)
        rhs += self.adv_p * _ddp(W, self.dp)
        if self.gamma != 0.0:
            rhs += _ddp(self.gamma_p * W, self.dp)
        if self.d_pp != 0.0:
            rhs += self.d_pp * _d2dp(W, self.dp)
        if self.d_xp != 0.0:
            rhs += self.d_xp * _ddx(_ddp(W, self.dp), self.dx)
        return rhs


def boundary_amplitude(values: np.ndarray) -> float:
    """Largest boundary sample relative to the field peak."""
    peak = max(np.abs(values).max(), 1e-300)
    edge = max(
        np.abs(values[0]).max(),
        np.abs(values[-1]).max(),
        np.abs(values[:, 0]).max(),
        np.abs(values[:, -1]).max(),
    )
    return float(edge / peak)


def qbm_rhs(w: WignerField, params: QbmParams) -> np.ndarray:
    """Master-equation rate field dW/dt on the grid of ``w``."""
    rel = boundary_amplitude(w.values)
    if rel > BOUNDARY_AMPLITUDE_TOL:
        raise DomainError(
            f"boundary amplitude {rel:.3e} of peak; domain too small for this state"
        )
    return _QbmStencil(w.grid, params).apply(w.values)


def qbm_stable_dt(grid, params: QbmParams) -> float:
    """Step-size bound for explicit RK4 on this grid."""
    x_max = max(abs(grid.x.min), abs(grid.x.max))
    p_max = max(abs(grid.p.min), abs(grid.p.max))
    limits = [
        grid.x.spacing / (p_max / params.M),
        grid.p.spacing / (params.M * params.omega0**2 * x_max + params.gamma * p_max),
    ]
    if params.d_pp > 0:
        limits.append(grid.p.spacing**2 / (2 * params.d_pp))
    return 0.4 * min(limits)


def qbm_evolve(
    w0: WignerField,
    params: QbmParams,
    t_final: float,
    dt: float | None = None,
    snapshot_stride: int | None = None,
    boundary_mode: str = "strict",
) -> list[WignerField]:
    """Explicit RK4 evolution; returns snapshots including t=0 and t_final.

    With dt=None the step comes from ``qbm_stable_dt`` and is halved (up to
    six times) whenever the normalization monitor sees growth beyond 1%.
    An explicit dt that fails the monitor raises immediately.

    boundary_mode="strict" aborts when the state stops being negligible at
    the domain edge; "monitor" keeps going (absorbing boundary) and is meant
    for the documented semiclassical sweep only.
    """
    if t_final < 0:
        raise ArgumentError("t_final must be positive")
    if boundary_mode not in ("strict", "monitor"):
        raise ArgumentError(f"unknown boundary_mode {boundary_mode!r}")
    if params.d_pp < 0:
        raise StabilityError(
            f"refusing to evolve with negative momentum diffusion D_PP={params.d_pp:.6g}"
        )
    if t_final == 0:
        return [w0]

    stencil = _QbmStencil(w0.grid, params)
    norm_tol = SNAPSHOT_NORM_TOL if boundary_mode == "strict" else math.inf
    auto_dt = dt is None
    if auto_dt:
        dt = qbm_stable_dt(w0.grid, params)

    for _attempt in range(7):
        n_steps = max(1, math.ceil(t_final / dt - 1e-12))
        stride = min(snapshot_stride or max(1, n_steps // 200), n_steps)
        n_steps = stride * math.ceil(n_steps / stride)  # keep snapshots uniform
        step = t_final / n_steps
        check_every = max(1, n_steps // 64)
        target = 1.0 if boundary_mode == "strict" else None

        W = w0.values.copy()
        snapshots = [w0]
        ok = True
        for j in range(1, n_steps + 1):
            k1 = stencil.apply(W)
            k2 = stencil.apply(W + 0.5 * step * k1)
            k3 = stencil.apply(W + 0.5 * step * k2)
            k4 = stencil.apply(W + step * k3)
            W = W + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            if j % check_every == 0 or j == n_steps:
                norm = w0.grid.d_gamma * float(W.sum())
                if not np.isfinite(norm):
                    ok = False
                    break
                if target is not None and abs(norm - target) > NORM_GROWTH_LIMIT:
                    ok = False
                    break
                if target is None and norm > 1.0 + NORM_GROWTH_LIMIT:
                    # an absorbing boundary may lose mass, never gain it
                    ok = False
                    break
            if j % stride == 0 or j == n_steps:
                if boundary_mode == "strict":
                    norm = w0.grid.d_gamma * float(W.sum())
                    if not np.isfinite(norm) or abs(norm - 1.0) > SNAPSHOT_NORM_TOL:
                        ok = False  # drifting before the 1% monitor trips
                        break
                    rel = boundary_amplitude(W)
                    if rel > BOUNDARY_AMPLITUDE_TOL:
                        raise DomainError(
                            f"state reached the domain boundary (amplitude {rel:.3e} "
                            f"of peak at t={j * step:.6g})"
                        )
                snapshots.append(
                    WignerField(w0.grid, W.copy(), time=j * step, norm_tol=norm_tol)
                )
        if ok:
            return snapshots
        if not auto_dt:
            raise StabilityError(f"norm growth beyond 1% at dt={dt}")
        dt = dt / 2.0
    raise StabilityError(f"evolution unstable even at dt={dt}")
