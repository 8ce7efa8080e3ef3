"""
Configuration-selection objectives.

The DyTC objective scores drafting k tokens with configuration S followed
by the cheapest possible continuation (one bottom-draft step):

    T(S, k) = (E[accepted] + a_S^k * a_dn) / (c_S * k + c_dn)
    E[accepted] = a_S (1 - a_S^k) / (1 - a_S)        (k when a_S ~ 1)

The greedy baseline maximizes the predicted local speedup of the next
step alone, E[accepted] / (c_S * k), scaled by the accumulated acceptance
of the leaf being expanded.
"""

from dataclasses import dataclass
from typing import Callable, Generic, List, Optional, Sequence, TypeVar
import logging

from calculations.constants import LIMIT_EPS
from calculations.helpers import check_alpha, check_count
from utils.exceptions import DomainError

logger = logging.getLogger(__name__)

C = TypeVar('C')


def expected_accepted(alpha: float, k: int) -> float:
    """Expected number of accepted tokens among k drafted ones."""
    if abs(1.0 - alpha) < LIMIT_EPS:
        return float(k)
    return alpha * (1.0 - alpha ** k) / (1.0 - alpha)


def dytc_objective(alpha: float, cost: float, k: int, alpha_dn: float, cost_dn: float) -> Optional[float]:
    """Objective value, or None when the denominator vanishes."""
    denominator = cost * k + cost_dn
    if abs(denominator) < LIMIT_EPS:
        return None
    return (expected_accepted(alpha, k) + alpha ** k * alpha_dn) / denominator


def greedy_objective(alpha: float, cost: float, k: int, p_acc: float = 1.0,
                     verify_cost: Optional[float] = None) -> Optional[float]:
    denominator = cost * k + (verify_cost or 0.0)
    if abs(denominator) < LIMIT_EPS:
        return None
    return expected_accepted(alpha, k) / denominator * p_acc


@dataclass(frozen=True)
class ConfigChoice(Generic[C]):
    """Winner of a configuration search plus the best alternative configuration."""
    config: C
    index: int
    k: int
    objective: float
    runner_up: Optional[C] = None
    runner_up_k: Optional[int] = None
    runner_up_objective: Optional[float] = None

    def as_record(self) -> dict:
        return {
            'config': str(self.config),
            'k': self.k,
            'objective': round(self.objective, 6),
            'runner_up': None if self.runner_up is None else str(self.runner_up),
            'runner_up_k': self.runner_up_k,
            'runner_up_objective': (None if self.runner_up_objective is None
                                    else round(self.runner_up_objective, 6)),
        }


def _validate(candidates: Sequence, alphas: Sequence[float], costs: Sequence[float], k_max: int) -> None:
    if not candidates:
        raise DomainError("candidate list must not be empty")
    if len(alphas) != len(candidates) or len(costs) != len(candidates):
        raise DomainError("need one alpha and one cost estimate per candidate")
    for alpha in alphas:
        check_alpha('alpha estimate', alpha)
    for cost in costs:
        if cost < 0:
            raise DomainError(f"cost estimate must be >= 0, got {cost}")
    check_count('k_max', k_max, minimum=1)


def _search(candidates: Sequence[C], k_max: int,
            score: Callable[[int, int], Optional[float]]) -> Optional[ConfigChoice[C]]:
    # k outer, candidates inner, strict improvement: ties keep the lower k,
    # then the earlier candidate
    best = None
    per_candidate: List[Optional[tuple]] = [None] * len(candidates)
    for k in range(1, k_max + 1):
        for i in range(len(candidates)):
            value = score(i, k)
            if value is None:
                continue
            if best is None or value > best[0]:
                best = (value, i, k)
            if per_candidate[i] is None or value > per_candidate[i][0]:
                per_candidate[i] = (value, k)

    if best is None or best[0] <= 0:
        return None

    value, index, k = best
    runner = None
    for i, entry in enumerate(per_candidate):
        if i == index or entry is None:
            continue
        if runner is None or entry[0] > runner[0]:
            runner = (entry[0], i, entry[1])

    return ConfigChoice(
        config=candidates[index],
        index=index,
        k=k,
        objective=value,
        runner_up=candidates[runner[1]] if runner else None,
        runner_up_k=runner[2] if runner else None,
        runner_up_objective=runner[0] if runner else None,
    )


def find_best_config(candidates: Sequence[C], alphas: Sequence[float], costs: Sequence[float],
                     alpha_dn: float, cost_dn: float, k_max: int) -> Optional[ConfigChoice[C]]:
    """
    Argmax of the DyTC objective over candidates x k in [1, k_max].

    Returns:
        ConfigChoice for the winner, or None when the best objective is <= 0
    """
    _validate(candidates, alphas, costs, k_max)
    check_alpha('alpha_dn', alpha_dn)
    return _search(candidates, k_max,
                   lambda i, k: dytc_objective(alphas[i], costs[i], k, alpha_dn, cost_dn))


def find_best_greedy(candidates: Sequence[C], alphas: Sequence[float], costs: Sequence[float],
                     k_max: int, p_acc: float = 1.0,
                     verify_cost: Optional[float] = None) -> Optional[ConfigChoice[C]]:
    """Argmax of the greedy local-speedup objective; None when nothing scores above 0."""
    _validate(candidates, alphas, costs, k_max)
    return _search(candidates, k_max,
                   lambda i, k: greedy_objective(alphas[i], costs[i], k, p_acc, verify_cost))
