"""Aggregate GDP-loss distributions for financial crises.

Thin Python layer over the C++ core: counterfactual trends, the thirteen
output-loss measures, frequency/severity fitting, Monte Carlo compounding with
a Panjer-recursion oracle, and the full reporting pipeline.
"""

from ._crisislda import (
    NumericalError,
    ValidationError,
    all_measures,
    compute_loss,
    fit_negbin,
    fit_poisson,
    fit_severity,
    generator_version,
    hp_filter,
    mean_excess,
    panjer_compound,
    precrisis_growth,
    run_pipeline,
    simulate_aggregate,
)

__all__ = [
    "NumericalError",
    "ValidationError",
    "all_measures",
    "compute_loss",
    "fit_negbin",
    "fit_poisson",
    "fit_severity",
    "generator_version",
    "hp_filter",
    "mean_excess",
    "panjer_compound",
    "precrisis_growth",
    "run_pipeline",
    "simulate_aggregate",
]

__version__ = "0.1.0"
