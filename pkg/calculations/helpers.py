"""
Shared helper functions for EWIF calculations.
"""

from typing import Callable, Tuple

from utils.exceptions import DomainError
from .constants import BISECTION_MAX_ITER, BISECTION_TOL, LIMIT_EPS


def check_alpha(name: str, value: float) -> float:
    """Raise DomainError unless value is an acceptance rate in [0, 1]."""
    if not 0.0 <= value <= 1.0:
        raise DomainError(f"{name} must be in [0, 1], got {value}")
    return float(value)


def check_cost(name: str, value: float) -> float:
    """Raise DomainError unless value is a positive cost coefficient."""
    if not value > 0.0:
        raise DomainError(f"{name} must be > 0, got {value}")
    return float(value)


def check_count(name: str, value: int, minimum: int = 0) -> int:
    """Raise DomainError unless value is an integer >= minimum."""
    if isinstance(value, bool) or int(value) != value:
        raise DomainError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise DomainError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def near_one(value: float) -> bool:
    """True when value is within the analytic-limit threshold of 1."""
    return abs(1.0 - value) < LIMIT_EPS


def geometric_sum(alpha: float, terms: int) -> float:
    """Sum of alpha**j for j in [0, terms), with the alpha -> 1 limit."""
    if terms <= 0:
        return 0.0
    if near_one(alpha):
        return float(terms)
    return (1.0 - alpha ** terms) / (1.0 - alpha)


def bisect_decreasing(f: Callable[[float], float], left: float, right: float,
                      tol: float = BISECTION_TOL,
                      max_iter: int = BISECTION_MAX_ITER) -> Tuple[float, float, int]:
    """
    Bisection for a non-increasing function with f(left) >= 0 > f(right).

    Returns:
        (lo, hi, iterations) where f(lo) >= 0 > f(hi) and hi - lo <= tol
        unless max_iter was exhausted first.
    """
    lo, hi = left, right
    iterations = 0
    while hi - lo > tol and iterations < max_iter:
        mid = (lo + hi) / 2
        if f(mid) >= 0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    return lo, hi, iterations
