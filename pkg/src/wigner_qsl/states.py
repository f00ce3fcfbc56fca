"""State representations: position-space density kernels and Wigner fields.

Covers the oscillator ground state, the exact time-dependent kernel of the
parametrically driven oscillator (built from the classical auxiliary
solutions X_t, Y_t), and Gaussian phase-space fields.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DomainError, ShapeError
from .grids import PhaseGrid, UniformGrid1D, integrate_2d

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-6
POSITIVITY_TOL = 1e-8
NORM_TOL = 1e-6


@dataclass(frozen=True)
class OscillatorParams:
    M: float = 1.0
    hbar: float = 1.0
    omega0: float = 1.0
    omega1: float = 1.0

    def __post_init__(self):
        for name in ("M", "hbar", "omega0", "omega1"):
            if not getattr(self, name) > 0:
                raise ArgumentError(f"{name} must be positive")


@dataclass(frozen=True)
class GaussianSpec:
    """Product Gaussian in phase space: means and widths per direction."""

    mu_x: float = 0.0
    sigma_x: float = 1.0
    mu_p: float = 0.0
    sigma_p: float = 1.0

    def __post_init__(self):
        if not (self.sigma_x > 0 and self.sigma_p > 0):
            raise ArgumentError("sigma_x and sigma_p must be positive")


class DensityKernel:
    """Complex samples of rho(x, y) on grid x grid at one time.

    Hermiticity and unit trace are enforced at construction; positivity of
    the scaled sample matrix is available through ``min_eigenvalue`` (an
    O(n^3) eigendecomposition, so not run on every construction).
    """

    def __init__(self, grid: UniformGrid1D, values: np.ndarray, time: float = 0.0):
        values = np.asarray(values, dtype=complex)
        if values.shape != (grid.n, grid.n):
            raise ShapeError(f"kernel shape {values.shape} != ({grid.n}, {grid.n})")
        herm = np.abs(values - values.conj().T).max()
        scale = max(np.abs(values).max(), 1.0)
        if herm > HERMITICITY_TOL * scale:
            raise ArgumentError(f"kernel not Hermitian: residue {herm:.3e}")
        tr = self._trace(grid, values)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ArgumentError(f"kernel trace {tr!r} not 1 within {TRACE_TOL}")
        self.grid = grid
        self.values = values
        self.values.setflags(write=False)
        self.time = float(time)

    @staticmethod
    def _trace(grid: UniformGrid1D, values: np.ndarray) -> float:
        return float(grid.spacing * np.real(np.trace(values)))

    @property
    def trace(self) -> float:
        return self._trace(self.grid, self.values)

    @property
    def purity(self) -> float:
        """spacing^2 * sum |rho_ij|^2 (1 for pure states)."""
        return float(self.grid.spacing**2 * np.sum(np.abs(self.values) ** 2))

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue of the scaled operator matrix spacing*rho."""
        return float(np.linalg.eigvalsh(self.grid.spacing * self.values)[0])

    def is_positive(self, tol: float = POSITIVITY_TOL) -> bool:
        return self.min_eigenvalue() >= -tol


class WignerField:
    """Real samples of W(x, p) on a PhaseGrid at one time.

    Normalization is enforced at construction.  The purity bound
    2*pi*hbar * int W^2 <= 1 holds for fields obtained from density
    kernels and is exposed as ``scaled_purity``; hand-built Gaussian seeds
    narrower than minimum uncertainty legitimately exceed it, so it is a
    diagnostic rather than a constructor constraint.
    """

    def __init__(
        self,
        grid: PhaseGrid,
        values: np.ndarray,
        time: float = 0.0,
        norm_tol: float = NORM_TOL,
    ):
        values = np.asarray(values, dtype=float)
        if values.shape != grid.shape:
            raise ShapeError(f"field shape {values.shape} != grid shape {grid.shape}")
        norm = integrate_2d(values, grid)
        if abs(norm - 1.0) > norm_tol:
            raise ArgumentError(f"field normalization {norm!r} not 1 within {norm_tol}")
        self.grid = grid
        self.values = values
        self.values.setflags(write=False)
        self.time = float(time)

    @property
    def normalization(self) -> float:
        return integrate_2d(self.values, self.grid)

    def scaled_purity(self, hbar: float) -> float:
        """2*pi*hbar * int W^2; equals the state purity for true Wigner functions."""
        return 2.0 * np.pi * hbar * integrate_2d(self.values**2, self.grid)


def _ground_wavefunction(params: OscillatorParams, x: np.ndarray) -> np.ndarray:
    a = params.M * params.omega0 / params.hbar
    return (a / np.pi) ** 0.25 * np.exp(-0.5 * a * x**2)


def ground_state_kernel(params: OscillatorParams, grid: UniformGrid1D) -> DensityKernel:
    """Projector kernel psi_0(x) psi_0*(y) of the oscillator ground state."""
    psi = _ground_wavefunction(params, grid.points)
    peak = _ground_wavefunction(params, np.array([0.0]))[0]
    edge = max(abs(psi[0]), abs(psi[-1]))
    if edge > 1e-6 * peak:
        raise DomainError(
            f"grid too narrow for ground state: boundary amplitude {edge / peak:.3e} of peak"
        )
    return DensityKernel(grid, np.outer(psi, psi.conj()), time=0.0)


def parametric_kernel(
    params: OscillatorParams,
    traj,  # AuxTrajectory; no import to keep layering one-way
    t: float,
    grid: UniformGrid1D,
) -> DensityKernel:
    """Exact driven-oscillator kernel at time t.

    The width factor is s = Y^2 + omega0^2 X^2 and the quadratic phase is
    proportional to (x^2 - y^2)(omega0^2 Xdot X + Ydot Y), with X, Y the
    classical solutions carried by ``traj``.
    """
    X, dX, Y, dY = traj.interp(t)
    w0sq = params.omega0**2
    s = Y**2 + w0sq * X**2
    c = w0sq * dX * X + dY * Y
    a = params.M * params.omega0 / params.hbar
    pref = np.sqrt(a / np.pi / s)
    xs = grid.points
    x2 = xs[:, None] ** 2
    y2 = xs[None, :] ** 2
    expo = -(a / (2.0 * s)) * (x2 + y2 + 1j * (x2 - y2) * c)
    return DensityKernel(grid, pref * np.exp(expo), time=t)


def gaussian_wigner(spec: GaussianSpec, grid: PhaseGrid, time: float = 0.0) -> WignerField:
    """Normalized product Gaussian sampled on the phase grid."""
    for axis, mu, sigma in (
        (grid.x, spec.mu_x, spec.sigma_x),
        (grid.p, spec.mu_p, spec.sigma_p),
    ):
        if mu - 6 * sigma < axis.min or mu + 6 * sigma > axis.max:
            raise DomainError(
                f"grid [{axis.min}, {axis.max}] does not span 6 sigma around mean {mu}"
            )
    X, P = grid.meshes()
    values = (
        1.0
        / (2.0 * np.pi * spec.sigma_x * spec.sigma_p)
        * np.exp(-((X - spec.mu_x) ** 2) / (2.0 * spec.sigma_x**2))
        * np.exp(-((P - spec.mu_p) ** 2) / (2.0 * spec.sigma_p**2))
    )
    return WignerField(grid, values, time=time)
