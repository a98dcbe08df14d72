"""Monotonicity functionals for semilinear elliptic and parabolic systems."""

from ._monotone import (
    ArgumentError,
    Error,
    HypothesisError,
    Model,
    OutOfDomainError,
    __version__,
    backward_heat_kernel,
    beta_interval,
    cutoff_profile,
    elliptic_catalog,
    error_integral_E,
    homogeneity_residual,
    parabolic_catalog,
    phi,
    phi_scan,
    psi,
    run,
    selftest,
)

__all__ = [
    "ArgumentError",
    "Error",
    "HypothesisError",
    "Model",
    "OutOfDomainError",
    "__version__",
    "backward_heat_kernel",
    "beta_interval",
    "cutoff_profile",
    "elliptic_catalog",
    "error_integral_E",
    "homogeneity_residual",
    "parabolic_catalog",
    "phi",
    "phi_scan",
    "psi",
    "run",
    "selftest",
]
