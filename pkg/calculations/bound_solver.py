"""
Cost-coefficient bounds for an intermediate draft model.

Answers "how cheap must the middle model be for a cascade to beat plain SD
with the bottom model alone?" in three ways:
- closed forms for fixed hyperparameters (HC exactly, VC by root finding
  plus an algebraic diagnostic),
- a numerical borderline over an acceptance-rate grid where both sides of
  the comparison are optimized over their integer hyperparameters.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence
import logging

import numpy as np
from scipy.optimize import brentq

from utils.exceptions import DomainError
from .constants import (
    BISECTION_MAX_ITER,
    BISECTION_TOL,
    BORDERLINE_C_MAX,
    BORDERLINE_C_MIN,
    BRACKET_EXPANSIONS,
    BRENTQ_XTOL,
    DEFAULT_BOTTOM_ALPHA,
)
from .ewif_calculator import (
    SpecParams,
    ewif_sd,
    hc_expected_tokens,
    pgf_eval,
    vc_cost,
    vc_expected_tokens,
)
from .helpers import bisect_decreasing, check_alpha, check_cost, check_count, geometric_sum, near_one

logger = logging.getLogger(__name__)

MODES = ('VC', 'HC')


@dataclass(frozen=True)
class BorderlinePoint:
    """Largest c_d1 for which the optimized cascade still ties optimized SD.

    present is False when even c_d1 -> 0 loses to SD; c_d1_critical is 0.0 then.
    """
    alpha_d1: float
    c_d1_critical: float
    present: bool = True
    bracket_width: float = 0.0


def _sd_baseline(alpha_t_d2: float, c_d2: float, k0: int) -> float:
    return ewif_sd(SpecParams(alpha_t_d2, c_d2, k0))


def bound_vc_closed(alpha_t_d1: float, alpha_d1_d2: float, c_d2: float, n: int, k: int,
                    k0: int, alpha_t_d2: Optional[float] = None) -> float:
    """
    Critical c_d1 where T_VC(c_d1) = T_SD(M_d2, k0), found by root finding.

    alpha_t_d2 defaults to alpha_d1_d2 (equal-acceptance assumption).
    Returns 0.0 when no positive c_d1 lets the cascade match the baseline.
    """
    check_alpha('alpha_t_d1', alpha_t_d1)
    check_alpha('alpha_d1_d2', alpha_d1_d2)
    check_cost('c_d2', c_d2)
    check_count('n', n, minimum=1)
    check_count('k', k)
    check_count('k0', k0)
    alpha_t_d2 = alpha_d1_d2 if alpha_t_d2 is None else check_alpha('alpha_t_d2', alpha_t_d2)

    baseline = _sd_baseline(alpha_t_d2, c_d2, k0)
    tokens = vc_expected_tokens(alpha_t_d1, alpha_d1_d2, n, k)

    def gap(c_d1: float) -> float:
        return tokens / vc_cost(c_d1, c_d2, n, k) - baseline

    if gap(0.0) <= 0:
        return 0.0

    hi = 1.0
    for _ in range(BRACKET_EXPANSIONS):
        if gap(hi) < 0:
            break
        hi *= 2.0
    else:
        raise DomainError("could not bracket the VC cost bound")

    return float(brentq(gap, 0.0, hi, xtol=BRENTQ_XTOL))


def bound_vc_algebraic(alpha_t_d1: float, alpha_d1_d2: float, c_d2: float, n: int, k: int,
                       k0: int, alpha_t_d2: Optional[float] = None) -> float:
    """
    Algebraic rearrangement of T_VC >= T_SD for c_d1, with phi the inner generating function.

    Diagnostic companion to bound_vc_closed; may be negative where the
    root finder reports 0.
    """
    check_alpha('alpha_t_d1', alpha_t_d1)
    check_alpha('alpha_d1_d2', alpha_d1_d2)
    check_cost('c_d2', c_d2)
    check_count('n', n, minimum=1)
    check_count('k', k)
    check_count('k0', k0)
    alpha_t_d2 = alpha_d1_d2 if alpha_t_d2 is None else check_alpha('alpha_t_d2', alpha_t_d2)

    if near_one(alpha_t_d1):
        cascade_tokens = vc_expected_tokens(alpha_t_d1, alpha_d1_d2, n, k)
    else:
        phi = pgf_eval(alpha_d1_d2, k, alpha_t_d1)
        cascade_tokens = (1.0 - alpha_t_d1 * phi ** n) / (1.0 - alpha_t_d1)
    baseline_tokens = geometric_sum(alpha_t_d2, k0 + 1)
    ratio = cascade_tokens * (c_d2 * k0 + 1.0) / baseline_tokens
    return (ratio - (1.0 + n * k * c_d2)) / n


def bound_hc_closed(alpha_d1: float, alpha_d2: float, c_d2: float, k_d1: int, k_d2: int,
                    k0: Optional[int] = None) -> float:
    """
    c_d1 <= (1/k_d1) [N_HC (1 - a2)(c_d2 k0 + 1) / (1 - a2^(k0+1)) - (1 + k_d2 c_d2)].

    k0 is the SD baseline draft length and defaults to k_d2.
    """
    check_alpha('alpha_d1', alpha_d1)
    check_alpha('alpha_d2', alpha_d2)
    check_cost('c_d2', c_d2)
    check_count('k_d2', k_d2)
    if check_count('k_d1', k_d1) < 1:
        raise DomainError("bound_hc_closed requires k_d1 >= 1")
    k0 = k_d2 if k0 is None else check_count('k0', k0)

    tokens = hc_expected_tokens(alpha_d1, alpha_d2, k_d1, k_d2)
    baseline_tokens = geometric_sum(alpha_d2, k0 + 1)
    return (tokens * (c_d2 * k0 + 1.0) / baseline_tokens - (1.0 + k_d2 * c_d2)) / k_d1


class BorderlineSolver:
    """Bisection on c_d1 for the best cascade EWIF against the best SD EWIF over M_d2.

    The bottom model (M_d2) enters with the equal-acceptance assumption:
    alpha(M_t, M_d2) = alpha(M_d1, M_d2) = alpha_d2.
    """

    def __init__(self, c_d2: float, k_max: int, n_max: int, mode: str = 'VC',
                 alpha_d2: float = DEFAULT_BOTTOM_ALPHA,
                 tol: float = BISECTION_TOL, max_iter: int = BISECTION_MAX_ITER):
        self.c_d2 = check_cost('c_d2', c_d2)
        self.k_max = check_count('k_max', k_max, minimum=1)
        self.n_max = check_count('n_max', n_max, minimum=1)
        self.alpha_d2 = check_alpha('alpha_d2', alpha_d2)
        mode = mode.upper()
        if mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
        self.mode = mode
        self.tol = tol
        self.max_iter = max_iter
        self.sd_best = max(_sd_baseline(alpha_d2, c_d2, k0) for k0 in range(0, k_max + 1))

    def _grid(self, alpha_d1: float):
        """Numerators N and denominator pieces (base, slope) so T(c) = N / (base + slope c)."""
        tokens, base, slope = [], [], []
        if self.mode == 'VC':
            for n in range(1, self.n_max + 1):
                for k in range(1, self.k_max + 1):
                    tokens.append(vc_expected_tokens(alpha_d1, self.alpha_d2, n, k))
                    base.append(1.0 + n * k * self.c_d2)
                    slope.append(float(n))
        else:
            # k_d1 = 0 is plain SD with M_d2 and can never beat the baseline
            for k_d1 in range(1, self.k_max + 1):
                for k_d2 in range(0, self.k_max + 1):
                    tokens.append(hc_expected_tokens(alpha_d1, self.alpha_d2, k_d1, k_d2))
                    base.append(1.0 + k_d2 * self.c_d2)
                    slope.append(float(k_d1))
        return np.array(tokens), np.array(base), np.array(slope)

    def margin(self, alpha_d1: float, c_d1: float) -> float:
        """max cascade EWIF minus max SD EWIF at (alpha_d1, c_d1)."""
        tokens, base, slope = self._grid(check_alpha('alpha_d1', alpha_d1))
        return float(np.max(tokens / (base + slope * c_d1))) - self.sd_best

    def solve(self, alpha_d1: float) -> BorderlinePoint:
        check_alpha('alpha_d1', alpha_d1)
        tokens, base, slope = self._grid(alpha_d1)

        def gap(c_d1: float) -> float:
            return float(np.max(tokens / (base + slope * c_d1))) - self.sd_best

        if gap(BORDERLINE_C_MAX) >= 0:
            return BorderlinePoint(alpha_d1, BORDERLINE_C_MAX)
        if gap(BORDERLINE_C_MIN) < 0:
            return BorderlinePoint(alpha_d1, 0.0, present=False)

        lo, hi, iterations = bisect_decreasing(gap, BORDERLINE_C_MIN, BORDERLINE_C_MAX,
                                               tol=self.tol, max_iter=self.max_iter)
        logger.debug(f"{self.mode} borderline alpha={alpha_d1:.4f} c={lo:.7f} after {iterations} steps")
        return BorderlinePoint(alpha_d1, lo, bracket_width=hi - lo)


def borderline_curve(alpha_grid: Sequence[float], c_d2: float, k_max: int, n_max: int,
                     mode: str = 'VC', alpha_d2: float = DEFAULT_BOTTOM_ALPHA) -> List[BorderlinePoint]:
    """Critical c_d1 for every alpha on the grid, in ascending alpha order."""
    grid = sorted(float(a) for a in alpha_grid)
    for alpha in grid:
        if not 0.0 < alpha < 1.0:
            raise DomainError(f"alpha grid values must lie in (0, 1), got {alpha}")
    solver = BorderlineSolver(c_d2, k_max, n_max, mode=mode, alpha_d2=alpha_d2)
    points = [solver.solve(alpha) for alpha in grid]
    logger.info(f"{solver.mode} borderline: {sum(p.present for p in points)}/{len(points)} points present")
    return points
