"""Correlation lightcones of non-Hermitian spin chains (C++ core)."""

from ._core import (
    ConfigError,
    Model,
    NumericalError,
    PTBroken,
    bundled_config,
    bundled_configs,
    cc,
    delta_rho_norm,
    equal_time_cc,
    mi_bound,
    mutual_information,
    pauli,
    propagator,
    run,
    scan,
    site_operator,
    state,
    tfim,
    verify,
)

__all__ = [
    "ConfigError",
    "Model",
    "NumericalError",
    "PTBroken",
    "bundled_config",
    "bundled_configs",
    "cc",
    "delta_rho_norm",
    "equal_time_cc",
    "mi_bound",
    "mutual_information",
    "pauli",
    "propagator",
    "run",
    "scan",
    "site_operator",
    "state",
    "tfim",
    "verify",
]
