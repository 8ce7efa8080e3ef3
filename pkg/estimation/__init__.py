"""
Online estimation for draft scheduling.

This module contains:
- EMA acceptance-rate estimators and the per-configuration catalog
- The Bayesian latency (cost) predictor
- Cold-start calibration and heuristic priors
"""

from .alpha_estimator import (
    AlphaEstimator,
    ConfigCatalog,
    UsageStats,
    accumulated_alpha,
    heuristic_priors,
    record_first_token_outcome,
)
from .latency_model import LatencyModel, LatencyObservation, fit_latency, predict_cost
from .calibration import CalibrationResult, calibrate

__all__ = [
    'AlphaEstimator',
    'ConfigCatalog',
    'UsageStats',
    'accumulated_alpha',
    'heuristic_priors',
    'record_first_token_outcome',
    'LatencyModel',
    'LatencyObservation',
    'fit_latency',
    'predict_cost',
    'CalibrationResult',
    'calibrate'
]
