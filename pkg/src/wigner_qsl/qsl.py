"""Speed-limit quantities assembled from state time series.

Rates of change come from 2nd-order finite differences (one-sided at the
interval ends); speeds are norms of those rates in either representation.
The inequality suite verifies, at every interior node, that each distance
grows no faster than the norm of the rate, and the pure-state chain
relating the Bures-angle speed to the overlap rate and the operator norms.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, RangeError, ShapeError
from .metrics import schatten_norm, wasserstein_norm

DEFAULT_ABS_TOL = 1e-4
DEFAULT_REL_TOL = 1e-3


def p_key(p: float) -> str:
    """Stable string key for a norm order ("p1", "p2", "pinf", ...)."""
    if math.isinf(p):
        return "pinf"
    if float(p) == int(p):
        return f"p{int(p)}"
    return f"p{p:g}"


@dataclass(frozen=True)
class SpeedSeries:
    times: np.ndarray
    values: np.ndarray
    label: str

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ArgumentError("times and values must have equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ArgumentError("times must be strictly increasing")
        if np.any(np.asarray(self.values) < 0):
            raise ArgumentError("speed values must be nonnegative")


@dataclass(frozen=True)
class InequalityViolation:
    check: str
    t: float
    p: float
    lhs: float
    rhs: float


@dataclass(frozen=True)
class CheckReport:
    n_checks: int
    violations: tuple[InequalityViolation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def describe(self) -> str:
        if self.ok:
            return f"all {self.n_checks} inequality checks passed"
        lines = [f"{len(self.violations)} of {self.n_checks} inequality checks failed:"]
        for v in self.violations:
            lines.append(
                f"  {v.check}: t={v.t:.6g} p={v.p:g} lhs={v.lhs:.6e} > rhs={v.rhs:.6e}"
            )
        return "\n".join(lines)


@dataclass
class QslReport:
    """Everything a run produces: speed series, distances, derived scalars."""

    times: np.ndarray
    series: dict[str, SpeedSeries]
    distances: dict[str, np.ndarray]
    config: dict
    fidelity: np.ndarray | None = None
    bures_angles: np.ndarray | None = None
    norm_check: np.ndarray | None = None
    tau_qsl_w: float | None = None
    checks: CheckReport | None = None
    stationary: bool = False
    equivalence_max_dev: float | None = None
    extras: dict = field(default_factory=dict)


def _times_of(states) -> np.ndarray:
    return np.array([s.time for s in states])


def _locate(times: np.ndarray, t: float, what: str) -> int:
    j = int(np.argmin(np.abs(times - t)))
    if abs(times[j] - t) > 1e-9 * max(1.0, abs(times[-1])):
        raise RangeError(f"no {what} snapshot at t={t}")
    return j


def _difference(prev, nxt, dt):
    return (nxt - prev) / (2.0 * dt)


def _one_sided(first, second, third, dt, forward: bool):
    if forward:
        return (-3.0 * first + 4.0 * second - third) / (2.0 * dt)
    return (3.0 * first - 4.0 * second + third) / (2.0 * dt)


def _rate_at(values: list[np.ndarray], times: np.ndarray, t: float, dt: float, what: str):
    j = _locate(times, t, what)
    n = len(values)
    step = int(round(dt / (times[1] - times[0]))) if n > 1 else 0
    if step < 1 or abs(step * (times[1] - times[0]) - dt) > 1e-9 * dt:
        raise RangeError(f"dt={dt} is not a multiple of the snapshot spacing")
    if j - step >= 0 and j + step < n:
        return _difference(values[j - step], values[j + step], dt)
    if j + 2 * step < n:
        return _one_sided(values[j], values[j + step], values[j + 2 * step], dt, True)
    if j - 2 * step >= 0:
        return _one_sided(values[j], values[j - step], values[j - 2 * step], dt, False)
    raise RangeError(f"not enough snapshots around t={t} for a 2nd-order rate")


def kernel_rate(kernels, t: float, dt: float) -> np.ndarray:
    """Finite-difference d(rho)/dt at time t from kernel snapshots."""
    grid = kernels[0].grid
    for k in kernels[1:]:
        if not k.grid.same_axis(grid):
            raise ShapeError("kernels live on different grids")
    return _rate_at([k.values for k in kernels], _times_of(kernels), t, dt, "kernel")


def wigner_rate(fields, t: float, dt: float) -> np.ndarray:
    """Finite-difference dW/dt at time t from Wigner snapshots.

    For master-equation evolutions the analytic generator (qbm_rhs) is the
    production path; this finite-difference form is the generic fallback
    and the cross-check oracle.
    """
    grid = fields[0].grid
    for f in fields[1:]:
        if not f.grid.same_grid(grid):
            raise ShapeError("fields live on different grids")
    return _rate_at([f.values for f in fields], _times_of(fields), t, dt, "field")


def v_qsl(kernels, t: float, dt: float, p: float) -> float:
    """Schatten-p norm of the kernel rate at time t."""
    rate = kernel_rate(kernels, t, dt)
    return schatten_norm(rate, kernels[0].grid.spacing, p)


def v_qsl_w(fields, t: float, dt: float, p: float) -> float:
    """Wasserstein-p norm of the Wigner rate at time t."""
    rate = wigner_rate(fields, t, dt)
    return wasserstein_norm(rate, fields[0].grid, p)


def series_rates(stack: np.ndarray, dt: float) -> np.ndarray:
    """Rates for a full uniformly-sampled series (one-sided at both ends)."""
    rates = np.empty_like(stack, dtype=float)
    rates[1:-1] = (stack[2:] - stack[:-2]) / (2.0 * dt)
    rates[0] = (-3.0 * stack[0] + 4.0 * stack[1] - stack[2]) / (2.0 * dt)
    rates[-1] = (3.0 * stack[-1] - 4.0 * stack[-2] + stack[-3]) / (2.0 * dt)
    return rates


def geometric_speed_checks(
    times: np.ndarray,
    operator_distances: dict[float, np.ndarray] | None = None,
    operator_speeds: dict[float, np.ndarray] | None = None,
    phase_distances: dict[float, np.ndarray] | None = None,
    phase_speeds: dict[float, np.ndarray] | None = None,
    overlap_rates: np.ndarray | None = None,
    bures_angles: np.ndarray | None = None,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
) -> CheckReport:
    """Inequality suite over one completed run.

    (a) d(ell_p)/dt <= ||rho_rate||_p for every operator-space p supplied;
    (b) the same in phase space;
    (c) for pure initial states, 2 cos(L) sin(L) dL/dt <= |<psi0|rho_rate|psi0>|
        <= min_p ||rho_rate||_p.
    All checks run at interior time nodes with tolerance abs_tol + rel_tol*|rhs|.
    """
    times = np.asarray(times)
    if len(times) < 3:
        raise ArgumentError("need at least 3 time nodes for interior checks")
    dt = times[1] - times[0]
    interior = slice(1, -1)
    violations: list[InequalityViolation] = []
    n_checks = 0

    def compare(check, p, lhs_arr, rhs_arr):
        nonlocal n_checks
        tol = abs_tol + rel_tol * np.abs(rhs_arr)
        bad = lhs_arr > rhs_arr + tol
        n_checks += len(lhs_arr)
        for i in np.flatnonzero(bad):
            violations.append(
                InequalityViolation(
                    check=check,
                    t=float(times[interior][i]),
                    p=p,
                    lhs=float(lhs_arr[i]),
                    rhs=float(rhs_arr[i]),
                )
            )

    def distance_vs_speed(check, distances, speeds):
        for p, dist in distances.items():
            d_rate = series_rates(np.asarray(dist, dtype=float), dt)[interior]
            compare(check, p, d_rate, np.asarray(speeds[p])[interior])

    if operator_distances:
        distance_vs_speed("operator-distance-speed", operator_distances, operator_speeds)
    if phase_distances:
        distance_vs_speed("phase-distance-speed", phase_distances, phase_speeds)

    if overlap_rates is not None:
        angles = np.asarray(bures_angles, dtype=float)
        angle_rate = series_rates(angles, dt)[interior]
        lhs = 2.0 * np.cos(angles[interior]) * np.sin(angles[interior]) * angle_rate
        mid = np.asarray(overlap_rates)[interior]
        compare("pure-chain-lower", 1.0, lhs, mid)
        min_speed = np.min(
            np.stack([np.asarray(v)[interior] for v in operator_speeds.values()]), axis=0
        )
        compare("pure-chain-upper", math.inf, mid, min_speed)

    return CheckReport(n_checks=n_checks, violations=tuple(violations))


def tau_qsl_w(d_series: SpeedSeries, v_series: SpeedSeries, tau: float) -> float:
    """Final distance divided by the time-averaged phase-space speed."""
    if not tau > 0:
        raise ArgumentError("tau must be positive")
    avg = float(np.trapezoid(v_series.values, v_series.times)) / tau
    if avg <= 0.0:
        raise ArgumentError("undefined result: average speed is zero")
    return float(d_series.values[-1]) / avg


def normalize_series(s: SpeedSeries) -> SpeedSeries:
    """Series scaled so its maximum is exactly 1."""
    peak = float(np.max(s.values))
    if peak <= 0.0:
        raise ArgumentError("cannot normalize an all-zero series")
    return SpeedSeries(s.times, s.values / peak, s.label + " (normalized)")
