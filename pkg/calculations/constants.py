"""
Shared constants for EWIF calculations.
"""

# Analytic-limit branch threshold for alpha -> 1 and alpha*x -> 1
LIMIT_EPS = 1e-9

# Borderline solver (bisection over c_d1 in (0, 1])
BISECTION_TOL = 1e-6
BISECTION_MAX_ITER = 60
BORDERLINE_C_MIN = 1e-12
BORDERLINE_C_MAX = 1.0

# Retrieval-based bottom draft assumptions
DEFAULT_BOTTOM_COST = 0.01
DEFAULT_BOTTOM_ALPHA = 0.3  # inside the 0.1-0.5 band typical for prompt lookup

# Hyperparameter search ranges
DEFAULT_K_MAX = 8
DEFAULT_N_MAX = 8

# Root finding for the single-configuration VC bound
BRENTQ_XTOL = 1e-14
BRACKET_EXPANSIONS = 64
