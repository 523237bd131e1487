"""Curvature tensors and the Riemann singular value problem."""

from ._core import (
    ConfigError,
    ConvergenceError,
    DomainError,
    RsvError,
    catalog_description,
    catalog_ids,
    closed_form_sigma,
    curvature,
    invariants,
    kerr_reduced,
    multistart,
    orbit,
    residual,
    run_cli,
    schwarzschild_reduced,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "DomainError",
    "RsvError",
    "catalog_description",
    "catalog_ids",
    "closed_form_sigma",
    "curvature",
    "invariants",
    "kerr_reduced",
    "multistart",
    "orbit",
    "residual",
    "run_cli",
    "schwarzschild_reduced",
]
