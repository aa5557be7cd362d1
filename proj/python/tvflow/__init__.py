"""Total variation flow with certified implicit Euler steps."""

from ._core import (
    ConfigError,
    Grid,
    SnapshotFormatError,
    config_reference,
    divergence,
    duality_gap,
    extinction_study,
    gradient,
    oracle_battery,
    read_snapshot,
    rof_prox,
    run_config,
    step,
    taut_string,
    total_variation,
    verify,
)

__all__ = [
    "ConfigError",
    "Grid",
    "SnapshotFormatError",
    "config_reference",
    "divergence",
    "duality_gap",
    "extinction_study",
    "gradient",
    "oracle_battery",
    "read_snapshot",
    "rof_prox",
    "run_config",
    "step",
    "taut_string",
    "total_variation",
    "verify",
]
