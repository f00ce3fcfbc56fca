"""Quantum speed limits in density-operator space and Wigner phase space."""

from .dynamics import (
    AuxTrajectory,
    FrequencyProtocol,
    QbmParams,
    qbm_evolve,
    qbm_rhs,
    solve_aux_ode,
)
from .grids import PhaseGrid, UniformGrid1D, integrate_2d
from .metrics import (
    bures_angle,
    bures_distance,
    continuity_check,
    pure_fidelity,
    schatten_distance,
    schatten_norm,
    wasserstein_distance,
    wasserstein_norm,
)
from .qsl import (
    CheckReport,
    QslReport,
    SpeedSeries,
    geometric_speed_checks,
    kernel_rate,
    normalize_series,
    tau_qsl_w,
    v_qsl,
    v_qsl_w,
    wigner_rate,
)
from .states import (
    DensityKernel,
    GaussianSpec,
    OscillatorParams,
    WignerField,
    gaussian_wigner,
    ground_state_kernel,
    parametric_kernel,
)
from .transforms import (
    inverse_wigner_transform,
    reciprocal_phase_grid,
    wigner_transform,
    wigner_transform_direct,
)

__all__ = [
    "AuxTrajectory",
    "CheckReport",
    "DensityKernel",
    "FrequencyProtocol",
    "GaussianSpec",
    "OscillatorParams",
    "PhaseGrid",
    "QbmParams",
    "QslReport",
    "SpeedSeries",
    "UniformGrid1D",
    "WignerField",
    "bures_angle",
    "bures_distance",
    "continuity_check",
    "gaussian_wigner",
    "geometric_speed_checks",
    "ground_state_kernel",
    "integrate_2d",
    "inverse_wigner_transform",
    "kernel_rate",
    "normalize_series",
    "parametric_kernel",
    "pure_fidelity",
    "qbm_evolve",
    "qbm_rhs",
    "reciprocal_phase_grid",
    "schatten_distance",
    "schatten_norm",
    "solve_aux_ode",
    "tau_qsl_w",
    "v_qsl",
    "v_qsl_w",
    "wasserstein_distance",
    "wasserstein_norm",
    "wigner_rate",
    "wigner_transform",
    "wigner_transform_direct",
]
