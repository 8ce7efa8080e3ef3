"""
Scheduler hyperparameters.
"""

from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, List, Optional

from drafting.draft_tree import DEFAULT_MAX_SIZE, DEFAULT_TOP_K, DEFAULT_TOP_P
from estimation.alpha_estimator import AlphaEstimator
from utils.exceptions import ConfigError

ESTIMATE_MODES = ('online', 'perfect')
CANDIDATE_SETS = ('drafts', 'singles', 'cascades')


@dataclass(frozen=True)
class SchedulerParams:
    """Knobs shared by the dynamic and static schedulers.

    greedy_verify_cost adds a verification term to the greedy denominator
    when set; update_all_expansions also feeds estimators with outcomes of
    expansions below the root that verification reached.
    """
    k_max: int = 5
    t_min: float = 1.1
    max_size: int = DEFAULT_MAX_SIZE
    top_k: int = DEFAULT_TOP_K
    top_p: float = DEFAULT_TOP_P
    calibration_steps: int = 0
    estimates: str = 'online'
    candidate_set: str = 'cascades'
    vc_inner_k: int = 4
    use_token_confidence: bool = True
    sibling_expansion: bool = True
    greedy_verify_cost: Optional[float] = None
    update_all_expansions: bool = False
    ema_window: int = AlphaEstimator.DEFAULT_WINDOW
    ema_smoothing: float = AlphaEstimator.DEFAULT_SMOOTHING
    latency_refit_every: int = 16

    def __post_init__(self):
        problems = self.problems()
        if problems:
            raise ConfigError("invalid scheduler parameters", problems)

    def problems(self) -> List[str]:
        problems = []
        if self.k_max < 1:
            problems.append(f"k_max must be >= 1, got {self.k_max}")
        if not self.t_min > 0:
            problems.append(f"t_min must be > 0, got {self.t_min}")
        if self.max_size < 1:
            problems.append(f"max_size must be >= 1, got {self.max_size}")
        if self.top_k < 1:
            problems.append(f"top_k must be >= 1, got {self.top_k}")
        if not 0.0 <= self.top_p <= 1.0:
            problems.append(f"top_p must be in [0, 1], got {self.top_p}")
        if self.calibration_steps < 0:
            problems.append(f"calibration_steps must be >= 0, got {self.calibration_steps}")
        if self.estimates not in ESTIMATE_MODES:
            problems.append(f"estimates must be one of {ESTIMATE_MODES}, got {self.estimates!r}")
        if self.candidate_set not in CANDIDATE_SETS:
            problems.append(f"candidate_set must be one of {CANDIDATE_SETS}, got {self.candidate_set!r}")
        if self.vc_inner_k < 1:
            problems.append(f"vc_inner_k must be >= 1, got {self.vc_inner_k}")
        if self.greedy_verify_cost is not None and self.greedy_verify_cost < 0:
            problems.append(f"greedy_verify_cost must be >= 0, got {self.greedy_verify_cost}")
        if self.ema_window < 1:
            problems.append(f"ema_window must be >= 1, got {self.ema_window}")
        if not 0.0 <= self.ema_smoothing <= 1.0:
            problems.append(f"ema_smoothing must be in [0, 1], got {self.ema_smoothing}")
        if self.latency_refit_every < 1:
            problems.append(f"latency_refit_every must be >= 1, got {self.latency_refit_every}")
        return problems

    @property
    def num_candidates(self) -> int:
        return self.top_k if self.sibling_expansion else 1

    def with_overrides(self, overrides: Optional[Dict[str, Any]]) -> 'SchedulerParams':
        if not overrides:
            return self
        unknown = sorted(set(overrides) - {f.name for f in fields(self)})
        if unknown:
            raise ConfigError("unknown scheduler parameters", [f"unknown key {k!r}" for k in unknown])
        return replace(self, **overrides)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
