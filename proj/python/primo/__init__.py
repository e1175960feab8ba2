"""Bandit simulation core: inverse gap weighting with model-assisted
covariate imputation."""

from ._primo import (
    covering_rate,
    estimate_constants,
    gamma_practical,
    igw_probabilities,
    log_guard,
    radius_rate,
    run_config,
    validate_config,
)

__all__ = [
    "covering_rate",
    "estimate_constants",
    "gamma_practical",
    "igw_probabilities",
    "log_guard",
    "radius_rate",
    "run_config",
    "validate_config",
]
