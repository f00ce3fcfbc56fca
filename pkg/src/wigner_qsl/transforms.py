"""Invertible transform between density kernels and Wigner fields.

Forward map, discretized per x-row over the kernel anti-diagonal:

    W(x, p) = 1/(pi*hbar) * int dy rho(x+y, x-y) exp(-2i p y / hbar)

The y samples are the kernel nodes themselves (y_m = m*dx), so the momentum
axis is pinned to the reciprocal grid p_k = pi*hbar*k/(n*dx) and the row
integral becomes a plain FFT.  A direct O(n^3) quadrature of the same sum is
kept as a slow reference oracle for small grids.
"""

import numpy as np

from .errors import NumericalConsistencyError, ShapeError
from .grids import PhaseGrid, UniformGrid1D
from .states import DensityKernel, WignerField

IMAG_RESIDUE_TOL = 1e-10


def _fft_orders(n: int) -> np.ndarray:
    """Integer mode numbers in natural (ascending) order: -n//2 .. n-1-n//2."""
    return np.arange(n) - n // 2


def reciprocal_phase_grid(xgrid: UniformGrid1D, hbar: float = 1.0) -> PhaseGrid:
    """Phase grid whose momentum axis matches the FFT discretization."""
    n = xgrid.n
    dp = np.pi * hbar / (n * xgrid.spacing)
    k = _fft_orders(n)
    p_axis = UniformGrid1D(min=float(k[0] * dp), max=float(k[-1] * dp), n=n)
    return PhaseGrid(x=xgrid, p=p_axis)


def _momentum_axis_matches(pgrid: PhaseGrid, xgrid: UniformGrid1D, hbar: float) -> bool:
    ref = reciprocal_phase_grid(xgrid, hbar).p
    got = pgrid.p
    tol = 1e-12 * max(abs(ref.max), 1.0)
    return got.n == ref.n and abs(got.min - ref.min) <= tol and abs(got.max - ref.max) <= tol


def _x_row_indices(pgrid: PhaseGrid, xgrid: UniformGrid1D) -> np.ndarray:
    """Kernel row index for every output x node (supports stride subsampling)."""
    if pgrid.x.same_axis(xgrid):
        return np.arange(xgrid.n)
    idx = np.rint((pgrid.x.points - xgrid.min) / xgrid.spacing).astype(int)
    recon = xgrid.min + idx * xgrid.spacing
    if (
        np.any(idx < 0)
        or np.any(idx >= xgrid.n)
        or np.abs(recon - pgrid.x.points).max() > 1e-9 * xgrid.spacing
    ):
        raise ShapeError("phase-grid x axis is not a sub-sampling of the kernel axis")
    return idx


def _antidiagonal_samples(values: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """g[r, m] = rho(x_i + y_m, x_i - y_m) with zero outside the grid."""
    n = values.shape[0]
    m = _fft_orders(n)[None, :]
    i = rows[:, None]
    a = i + m
    b = i - m
    valid = (a >= 0) & (a < n) & (b >= 0) & (b < n)
    return np.where(valid, values[a.clip(0, n - 1), b.clip(0, n - 1)], 0.0)


def wigner_transform(
    rho: DensityKernel, pgrid: PhaseGrid, hbar: float = 1.0
) -> WignerField:
    """FFT-based Wigner representation of a density kernel."""
    if not _momentum_axis_matches(pgrid, rho.grid, hbar):
        raise ShapeError("momentum axis does not match the reciprocal grid of the kernel")
    rows = _x_row_indices(pgrid, rho.grid)
    g = _antidiagonal_samples(rho.values, rows)
    h = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(g, axes=1), axis=1), axes=1)
    w = (rho.grid.spacing / (np.pi * hbar)) * h
    scale = max(np.abs(w.real).max(), 1e-300)
    residue = np.abs(w.imag).max()
    if residue > IMAG_RESIDUE_TOL * scale:
        raise NumericalConsistencyError(
            f"imaginary residue {residue:.3e} above threshold (peak {scale:.3e})"
        )
    return WignerField(pgrid, w.real, time=rho.time)


def wigner_transform_direct(
    rho: DensityKernel, pgrid: PhaseGrid, hbar: float = 1.0
) -> WignerField:
    """O(n^3) quadrature of the transform; reference oracle for small n."""
    if not _momentum_axis_matches(pgrid, rho.grid, hbar):
        raise ShapeError("momentum axis does not match the reciprocal grid of the kernel")
    rows = _x_row_indices(pgrid, rho.grid)
    g = _antidiagonal_samples(rho.values, rows)
    y = _fft_orders(rho.grid.n) * rho.grid.spacing
    phase = np.exp(-2j * np.outer(y, pgrid.p.points) / hbar)
    w = (rho.grid.spacing / (np.pi * hbar)) * (g @ phase)
    return WignerField(pgrid, w.real, time=rho.time)


def _row_synthesis(w_rows: np.ndarray, half_step: bool) -> np.ndarray:
    """S[r, m] = sum_k W[r, k] exp(2i pi k (m + offset) / n), offset 0 or 1/2."""
    n = w_rows.shape[1]
    rows = w_rows.astype(complex)
    if half_step:
        rows = rows * np.exp(1j * np.pi * _fft_orders(n) / n)[None, :]
    return n * np.fft.fftshift(
        np.fft.ifft(np.fft.ifftshift(rows, axes=1), axis=1), axes=1
    )


def _upsample_rows(w: np.ndarray) -> np.ndarray:
    """Spectral x-interpolation: rows at the midpoints x_i + dx/2."""
    n = w.shape[0]
    f = np.fft.fft(w, axis=0)
    f2 = np.zeros((2 * n,) + w.shape[1:], dtype=complex)
    half = (n + 1) // 2
    f2[:half] = f[:half]
    f2[2 * n - (n - half):] = f[half:]
    if n % 2 == 0:  # split the Nyquist bin symmetrically
        nyquist = 0.5 * f[half]
        f2[half] = nyquist
        f2[2 * n - (n - half)] = nyquist
    return 2.0 * np.fft.ifft(f2, axis=0).real[1::2]


def inverse_wigner_transform(
    w: WignerField, xgrid: UniformGrid1D, hbar: float = 1.0
) -> DensityKernel:
    """Reconstruct the density kernel from a Wigner field.

    Kernel nodes with even index sum i+j lie on anti-diagonals through grid
    x nodes and are recovered exactly by the inverse FFT; odd-sum nodes need
    W at x midpoints, obtained by spectral interpolation (accurate for the
    boundary-negligible fields this package produces).
    """
    if not _momentum_axis_matches(w.grid, xgrid, hbar):
        raise ShapeError("momentum axis does not match the reciprocal grid of the target")
    if not w.grid.x.same_axis(xgrid):
        raise ShapeError("inverse transform requires the full kernel axis")
    n = xgrid.n
    dp = w.grid.p.spacing
    m = _fft_orders(n)[None, :]
    rho = np.zeros((n, n), dtype=complex)

    g = dp * _row_synthesis(w.values, half_step=False)
    i = np.arange(n)[:, None]
    a, b = i + m, i - m
    valid = (a >= 0) & (a < n) & (b >= 0) & (b < n)
    rho[a[valid], b[valid]] = g[valid]

    g_mid = dp * _row_synthesis(_upsample_rows(w.values)[: n - 1], half_step=True)
    i = np.arange(n - 1)[:, None]
    a, b = i + m + 1, i - m
    valid = (a >= 0) & (a < n) & (b >= 0) & (b < n)
    rho[a[valid], b[valid]] = g_mid[valid]

    return DensityKernel(xgrid, rho, time=w.time)
