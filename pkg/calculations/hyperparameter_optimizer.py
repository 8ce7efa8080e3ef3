"""
Exhaustive integer hyperparameter search for SD, VC and HC.

Every search scans its full grid and keeps the first maximum it meets, so
ties resolve toward smaller hyperparameters (smaller n, then smaller k).
"""

from typing import NamedTuple
import logging

from .ewif_calculator import HcParams, SpecParams, VcParams, ewif_hc, ewif_sd, ewif_vc
from .helpers import check_count

logger = logging.getLogger(__name__)


class SdOptimum(NamedTuple):
    k: int
    ewif: float


class VcOptimum(NamedTuple):
    n: int
    k: int
    ewif: float


class HcOptimum(NamedTuple):
    k_d1: int
    k_d2: int
    ewif: float


def optimal_sd(alpha: float, cost: float, k_max: int) -> SdOptimum:
    """argmax of T_SD over k in [0, k_max]."""
    check_count('k_max', k_max, minimum=1)
    best = SdOptimum(0, ewif_sd(SpecParams(alpha, cost, 0)))
    for k in range(1, k_max + 1):
        value = ewif_sd(SpecParams(alpha, cost, k))
        if value > best.ewif:
            best = SdOptimum(k, value)
    return best


def optimal_vc(alpha_t_d1: float, alpha_d1_d2: float, c_d1: float, c_d2: float,
               n_max: int, k_max: int) -> VcOptimum:
    """argmax of T_VC over n in [1, n_max] and k in [1, k_max]."""
    check_count('n_max', n_max, minimum=1)
    check_count('k_max', k_max, minimum=1)
    best = None
    for n in range(1, n_max + 1):
        for k in range(1, k_max + 1):
            value = ewif_vc(VcParams(alpha_t_d1, alpha_d1_d2, c_d1, c_d2, n, k))
            if best is None or value > best.ewif:
                best = VcOptimum(n, k, value)
    logger.debug(f"VC optimum n={best.n} k={best.k} ewif={best.ewif:.6f}")
    return best


def optimal_hc(alpha_d1: float, alpha_d2: float, c_d1: float, c_d2: float,
               k_max: int) -> HcOptimum:
    """argmax of T_HC over (k_d1, k_d2) in [0, k_max]^2 with k_d1 + k_d2 >= 1."""
    check_count('k_max', k_max, minimum=1)
    best = None
    for k_d1 in range(0, k_max + 1):
        for k_d2 in range(0, k_max + 1):
            if k_d1 + k_d2 == 0:
                continue
            value = ewif_hc(HcParams(alpha_d1, alpha_d2, c_d1, c_d2, k_d1, k_d2))
            if best is None or value > best.ewif:
                best = HcOptimum(k_d1, k_d2, value)
    logger.debug(f"HC optimum k_d1={best.k_d1} k_d2={best.k_d2} ewif={best.ewif:.6f}")
    return best
