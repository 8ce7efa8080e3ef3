"""
Online acceptance-rate estimation per draft configuration.

Each estimator keeps a sliding window of first-draft-token outcomes and an
exponential moving average over the window mean:

    ema <- lambda * ema + (1 - lambda) * mean(window)

Estimates of configurations that are not selected are left untouched.
"""

from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, Optional
import logging
import math

from drafting.model_spec import Hierarchy
from utils.exceptions import DomainError

logger = logging.getLogger(__name__)

PRIOR_FLOOR = 0.05
PRIOR_CEILING = 0.95


class AlphaEstimator:
    """EMA over a sliding window of first-token acceptance outcomes."""

    DEFAULT_WINDOW = 20
    DEFAULT_SMOOTHING = 0.7
    UNINITIALIZED_EMA = 0.5

    def __init__(self, window: int = DEFAULT_WINDOW, smoothing: float = DEFAULT_SMOOTHING,
                 prior: Optional[float] = None):
        if window < 1:
            raise DomainError(f"window must be >= 1, got {window}")
        if not 0.0 <= smoothing <= 1.0:
            raise DomainError(f"smoothing (lambda) must be in [0, 1], got {smoothing}")
        self.window = window
        self.smoothing = smoothing
        self.history = deque(maxlen=window)
        self.ema = self.UNINITIALIZED_EMA
        self.initialized = False
        self.updates = 0
        if prior is not None:
            self.seed(prior)

    def seed(self, prior: float) -> None:
        """Start from a prior; the next outcome blends into it."""
        if not 0.0 <= prior <= 1.0:
            raise DomainError(f"prior must be in [0, 1], got {prior}")
        self.ema = float(prior)
        self.initialized = True

    @property
    def recent(self) -> Optional[float]:
        """Mean over the available window (fewer than H outcomes early on)."""
        if not self.history:
            return None
        return sum(self.history) / len(self.history)

    def update(self, accepted: bool) -> float:
        self.history.append(1 if accepted else 0)
        recent = self.recent
        if not self.initialized:
            self.ema = recent
            self.initialized = True
        else:
            self.ema = self.smoothing * self.ema + (1.0 - self.smoothing) * recent
        self.ema = min(1.0, max(0.0, self.ema))
        self.updates += 1
        return self.ema

    def state(self) -> Dict:
        return {
            'ema': round(self.ema, 6),
            'history': list(self.history),
            'initialized': self.initialized,
        }


@dataclass
class UsageStats:
    """Per-configuration counters for the step log."""
    selections: int = 0
    first_outcomes: int = 0
    drafted_tokens: int = 0
    accepted_tokens: int = 0


class ConfigCatalog:
    """Estimators keyed by model id, plus aliases from configuration ids.

    A vertical-cascade configuration shares the estimator of its top
    model, because the target only ever sees tokens that model approved.
    """

    def __init__(self, window: int = AlphaEstimator.DEFAULT_WINDOW,
                 smoothing: float = AlphaEstimator.DEFAULT_SMOOTHING):
        self.window = window
        self.smoothing = smoothing
        self.estimators: Dict[str, AlphaEstimator] = {}
        self.aliases: Dict[str, str] = {}
        self.usage: Dict[str, UsageStats] = {}

    def __contains__(self, config_id: str) -> bool:
        return config_id in self.aliases

    def register(self, config_id: str, key: Optional[str] = None) -> AlphaEstimator:
        key = config_id if key is None else key
        if key not in self.estimators:
            self.estimators[key] = AlphaEstimator(self.window, self.smoothing)
            self.aliases.setdefault(key, key)
            self.usage.setdefault(key, UsageStats())
        self.aliases[config_id] = key
        self.usage.setdefault(config_id, UsageStats())
        return self.estimators[key]

    def key_for(self, config_id: str) -> str:
        try:
            return self.aliases[config_id]
        except KeyError:
            raise KeyError(f"unknown configuration {config_id!r}") from None

    def estimator(self, config_id: str) -> AlphaEstimator:
        return self.estimators[self.key_for(config_id)]

    def alpha(self, config_id: str) -> float:
        return self.estimator(config_id).ema

    def seed_priors(self, priors: Dict[str, float], overwrite: bool = False) -> None:
        for key, prior in priors.items():
            estimator = self.estimators.get(key) or self.register(key)
            if overwrite or not estimator.initialized:
                estimator.seed(prior)

    def record_first_token_outcome(self, config_id: str, accepted: bool) -> float:
        ema = self.estimator(config_id).update(accepted)
        self.usage[config_id].first_outcomes += 1
        return ema

    def record_selection(self, config_id: str) -> None:
        self.key_for(config_id)
        self.usage[config_id].selections += 1

    def record_tokens(self, config_id: str, drafted: int, accepted: int) -> None:
        self.key_for(config_id)
        stats = self.usage[config_id]
        stats.drafted_tokens += drafted
        stats.accepted_tokens += accepted

    def snapshot(self) -> Dict[str, float]:
        """Current ema per estimator key."""
        return {key: round(est.ema, 6) for key, est in self.estimators.items()}

    def dump(self) -> Dict[str, Dict]:
        """Full estimator state (ema and window) per key."""
        return {key: est.state() for key, est in self.estimators.items()}


def record_first_token_outcome(catalog: ConfigCatalog, config_id: str, accepted: bool) -> ConfigCatalog:
    catalog.record_first_token_outcome(config_id, accepted)
    return catalog


def accumulated_alpha(path: Iterable[float]) -> float:
    """Product of per-edge acceptance values; 1.0 for the root."""
    values = list(path)
    for value in values:
        if not 0.0 <= value <= 1.0:
            raise DomainError(f"path values must be in [0, 1], got {value}")
    return math.prod(values)


def heuristic_priors(hierarchy: Hierarchy) -> Dict[str, float]:
    """
    Cold-start priors from cost rank: cheaper (more aggressive) models get lower alpha.

    With n models ranked by descending cost, rank r gets
    clamp(1 - (r + 1) / (n + 1), 0.05, 0.95).
    """
    ranked = sorted(hierarchy.models, key=lambda m: -m.cost)
    n = len(ranked)
    priors = {}
    for rank, model in enumerate(ranked):
        aggressiveness = (rank + 1) / (n + 1)
        priors[model.id] = min(PRIOR_CEILING, max(PRIOR_FLOOR, 1.0 - aggressiveness))
    return priors
