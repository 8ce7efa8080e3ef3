"""
EWIF calculation utilities.

This module contains calculation utilities for:
- Closed-form EWIF of SD, vertical cascade and horizontal cascade
- Integer hyperparameter optimization
- Cost-coefficient bounds and borderline curves
"""

from .ewif_calculator import (
    HcParams,
    SpecParams,
    VcParams,
    ewif_hc,
    ewif_sd,
    ewif_vc,
    expected_tokens_sd,
    pgf_coefficients,
    pgf_eval,
)
from .hyperparameter_optimizer import optimal_hc, optimal_sd, optimal_vc
from .bound_solver import (
    BorderlinePoint,
    BorderlineSolver,
    borderline_curve,
    bound_hc_closed,
    bound_vc_algebraic,
    bound_vc_closed,
)

__all__ = [
    'SpecParams',
    'VcParams',
    'HcParams',
    'pgf_eval',
    'pgf_coefficients',
    'expected_tokens_sd',
    'ewif_sd',
    'ewif_vc',
    'ewif_hc',
    'optimal_sd',
    'optimal_vc',
    'optimal_hc',
    'BorderlinePoint',
    'BorderlineSolver',
    'borderline_curve',
    'bound_vc_closed',
    'bound_vc_algebraic',
    'bound_hc_closed'
]
