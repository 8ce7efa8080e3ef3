"""
Vectorized i.i.d. Monte Carlo estimators of SD, HC and VC EWIF.

Per verify cycle, the run of accepted drafts before the first rejection is
geometric: G = Geometric(1 - alpha) - 1 on {0, 1, ...}. Cycle costs are
deterministic, so only the token counts are sampled.

    SD:  min(G, k) + 1
    HC:  G1 + 1 if G1 < k1, else k1 + min(G2, k2) + 1
    VC:  D = sum over n rounds of (min(G_i, k) + 1) top-verified tokens,
         then min(G_t, D) + 1 tokens reach the target
"""

from typing import NamedTuple, Optional
import logging
import math

import numpy as np

from calculations.ewif_calculator import HcParams, SpecParams, VcParams

logger = logging.getLogger(__name__)

DEFAULT_CYCLES = 1_000_000
CHUNK = 250_000


class McEstimate(NamedTuple):
    ewif: float
    std_error: float
    cycles: int


def _runs(alpha: float, cap: int, size: int, rng: np.random.Generator) -> np.ndarray:
    """Accepted-run lengths clipped at cap."""
    if alpha >= 1.0:
        return np.full(size, cap, dtype=np.int64)
    return np.minimum(rng.geometric(1.0 - alpha, size=size) - 1, cap)


def _estimate(sample_tokens, cycles: int, cost: float, rng: np.random.Generator) -> McEstimate:
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < cycles:
        size = min(CHUNK, cycles - done)
        tokens = sample_tokens(size, rng).astype(np.float64)
        total += tokens.sum()
        total_sq += (tokens ** 2).sum()
        done += size
    mean = total / cycles
    variance = max(0.0, total_sq / cycles - mean ** 2)
    return McEstimate(mean / cost, math.sqrt(variance / cycles) / cost, cycles)


def mc_ewif_sd(params: SpecParams, cycles: int = DEFAULT_CYCLES,
               rng: Optional[np.random.Generator] = None) -> McEstimate:
    rng = rng if rng is not None else np.random.default_rng(0)

    def sample(size, g):
        return _runs(params.alpha, params.k, size, g) + 1

    return _estimate(sample, cycles, params.cost * params.k + 1.0, rng)


def mc_ewif_hc(params: HcParams, cycles: int = DEFAULT_CYCLES,
               rng: Optional[np.random.Generator] = None) -> McEstimate:
    rng = rng if rng is not None else np.random.default_rng(0)
    k1, k2 = params.k_d1, params.k_d2

    def sample(size, g):
        first = _runs(params.alpha_d1, k1, size, g)
        second = _runs(params.alpha_d2, k2, size, g)
        return np.where(first < k1, first + 1, k1 + second + 1)

    cost = 1.0 + k1 * params.c_d1 + k2 * params.c_d2
    return _estimate(sample, cycles, cost, rng)


def mc_ewif_vc(params: VcParams, cycles: int = DEFAULT_CYCLES,
               rng: Optional[np.random.Generator] = None) -> McEstimate:
    rng = rng if rng is not None else np.random.default_rng(0)
    n, k = params.n, params.k

    def sample(size, g):
        drafted = np.zeros(size, dtype=np.int64)
        for _ in range(n):
            drafted += _runs(params.alpha_d1_d2, k, size, g) + 1
        target_run = _runs(params.alpha_t_d1, n * (k + 1), size, g)
        return np.minimum(target_run, drafted) + 1

    cost = 1.0 + n * params.c_d1 + n * k * params.c_d2
    return _estimate(sample, cycles, cost, rng)
