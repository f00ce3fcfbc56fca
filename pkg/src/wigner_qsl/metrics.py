"""Distinguishability measures for both state representations.

Operator side: Schatten-p norms and distances of sampled kernels, with the
singular values of the integral operator approximated as spacing times the
singular values of the sample matrix.  Phase-space side: L^p norms and
distances of fields under the rectangle rule.  Plus pure-state fidelity and
the Bures angle/distance derived from it.

p must lie in [1, inf]; smaller exponents do not define norms and are
rejected.
"""

import math

import numpy as np

from .errors import ArgumentError, ShapeError
from .grids import PhaseGrid, integrate_2d
from .states import DensityKernel, WignerField

PURITY_TOL = 1e-6


def _check_p(p: float) -> float:
    p = float(p)
    if math.isnan(p) or p < 1.0:
        raise ArgumentError(f"p must be in [1, inf], got {p}")
    return p


def schatten_norm(values: np.ndarray, spacing: float, p: float) -> float:
    """Schatten-p norm of the operator with sample matrix ``values``.

    Operator singular values are spacing * (singular values of the samples).
    """
    p = _check_p(p)
    values = np.asarray(values)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {values.shape}")
    sv = spacing * np.linalg.svd(values, compute_uv=False)
    if math.isinf(p):
        return float(sv[0])
    return float(np.sum(sv**p) ** (1.0 / p))


def schatten_norm_eig_oracle(values: np.ndarray, spacing: float, p: float) -> float:
    """Same norm via eigendecomposition of A^dag A; cross-check for tests."""
    p = _check_p(p)
    a = spacing * np.asarray(values, dtype=complex)
    eigs = np.linalg.eigvalsh(a.conj().T @ a)
    sv = np.sqrt(np.clip(eigs, 0.0, None))
    if math.isinf(p):
        return float(sv[-1])
    return float(np.sum(sv**p) ** (1.0 / p))


def schatten_distance(a: DensityKernel, b: DensityKernel, p: float) -> float:
    if not a.grid.same_axis(b.grid):
        raise ShapeError("kernels live on different grids")
    return schatten_norm(a.values - b.values, a.grid.spacing, p)


def wasserstein_norm(f: np.ndarray, grid: PhaseGrid, p: float) -> float:
    """L^p norm of a phase-space field: (int |f|^p dGamma)^(1/p)."""
    p = _check_p(p)
    f = np.asarray(f)
    if f.shape != grid.shape:
        raise ShapeError(f"field shape {f.shape} != grid shape {grid.shape}")
    if math.isinf(p):
        return float(np.abs(f).max())
    return float(integrate_2d(np.abs(f) ** p, grid) ** (1.0 / p))


def wasserstein_distance(a: WignerField, b: WignerField, p: float) -> float:
    if not a.grid.same_grid(b.grid):
        raise ShapeError("fields live on different grids")
    return wasserstein_norm(a.values - b.values, a.grid, p)


def pure_fidelity(psi0_kernel: DensityKernel, rho_t: DensityKernel) -> float:
    """<psi0| rho_t |psi0> for a pure reference kernel psi0 psi0*."""
    if abs(psi0_kernel.purity - 1.0) > PURITY_TOL:
        raise ArgumentError(
            f"reference kernel is not pure (purity {psi0_kernel.purity!r})"
        )
    if not psi0_kernel.grid.same_axis(rho_t.grid):
        raise ShapeError("kernels live on different grids")
    overlap = psi0_kernel.grid.spacing**2 * np.sum(
        psi0_kernel.values.conj() * rho_t.values
    )
    return float(overlap.real)


def _clamp_fidelity(F: float) -> float:
    if not -1e-6 <= F <= 1.0 + 1e-6:
        raise ArgumentError(f"fidelity {F} outside [0, 1] beyond roundoff slack")
    return min(max(F, 0.0), 1.0)


def bures_angle(F: float) -> float:
    """arccos(sqrt(F))."""
    return float(np.arccos(np.sqrt(_clamp_fidelity(F))))


def bures_distance(F: float) -> float:
    """sqrt(2 (1 - sqrt(F)))."""
    return float(np.sqrt(2.0 * (1.0 - np.sqrt(_clamp_fidelity(F)))))


def continuity_check(F: float, l1: float, tol: float = 1e-6) -> bool:
    """Whether 1 - sqrt(F) <= l1/2 <= sqrt(1 - F) within tolerance."""
    F = _clamp_fidelity(F)
    lower = 1.0 - math.sqrt(F)
    upper = math.sqrt(1.0 - F)
    return lower <= l1 / 2.0 + tol and l1 / 2.0 <= upper + tol
