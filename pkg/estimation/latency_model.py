"""
Bayesian linear regression for draft-call latency.

Cost of one draft call is modelled as affine in the number of drafted
tokens with a per-model slope and intercept, plus a shared weight on the
input width (how many sibling sequences ride along). Features for model
tier t out of T tiers:

    [onehot(t) * k, onehot(t), width]

The conjugate Gaussian posterior is tracked in information form
(precision matrix and precision-weighted mean), so sequential batches of
observations are exact.
"""

from typing import Iterable, NamedTuple, Optional, Sequence
import copy
import logging

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from drafting.model_spec import Hierarchy
from utils.exceptions import DomainError

logger = logging.getLogger(__name__)


class LatencyObservation(NamedTuple):
    model_id: str
    k: int
    width: int
    cost: float


class LatencyModel:
    """Conjugate Bayesian regression over per-call draft cost."""

    DEFAULT_PRIOR_PRECISION = 1.0
    DEFAULT_NOISE_PRECISION = 25.0
    MIN_PREDICTION = 1e-4

    def __init__(self, tiers: Sequence[str], prior_mean: Optional[np.ndarray] = None,
                 prior_precision: float = DEFAULT_PRIOR_PRECISION,
                 noise_precision: float = DEFAULT_NOISE_PRECISION):
        if not tiers:
            raise DomainError("latency model needs at least one tier")
        if prior_precision <= 0 or noise_precision <= 0:
            raise DomainError("prior and noise precision must be > 0")
        self.tiers = list(tiers)
        self._tier_index = {tier: i for i, tier in enumerate(self.tiers)}
        self.dim = 2 * len(self.tiers) + 1
        self.prior_precision = prior_precision
        self.noise_precision = noise_precision

        mean = np.zeros(self.dim) if prior_mean is None else np.asarray(prior_mean, dtype=float)
        if mean.shape != (self.dim,):
            raise DomainError(f"prior mean must have shape ({self.dim},), got {mean.shape}")
        self.prior_mean = mean.copy()
        self.precision = prior_precision * np.eye(self.dim)
        self.shift = prior_precision * mean
        self.num_observations = 0
        self._mean = mean.copy()

    @classmethod
    def from_hierarchy(cls, hierarchy: Hierarchy, **kwargs) -> 'LatencyModel':
        """Prior mean equal to the nominal costs: per-step slope for neural drafts, flat intercept otherwise."""
        tiers = hierarchy.ids
        t = len(tiers)
        mean = np.zeros(2 * t + 1)
        for i, model in enumerate(hierarchy.models):
            if model.is_neural:
                mean[i] = model.cost
            else:
                mean[t + i] = model.cost
        return cls(tiers, prior_mean=mean, **kwargs)

    def features(self, model_id: str, k: int, width: int = 1) -> np.ndarray:
        try:
            tier = self._tier_index[model_id]
        except KeyError:
            raise DomainError(f"unknown latency tier {model_id!r}") from None
        x = np.zeros(self.dim)
        x[tier] = k
        x[len(self.tiers) + tier] = 1.0
        x[-1] = width
        return x

    @property
    def mean(self) -> np.ndarray:
        return self._mean

    @property
    def covariance(self) -> np.ndarray:
        factor = cho_factor(self.precision)
        return cho_solve(factor, np.eye(self.dim))

    def update(self, observations: Iterable[LatencyObservation]) -> 'LatencyModel':
        """In-place conjugate update with a batch of observations."""
        rows = [(self.features(o.model_id, o.k, o.width), o.cost) for o in observations]
        if not rows:
            return self
        X = np.vstack([r[0] for r in rows])
        y = np.array([r[1] for r in rows])
        self.precision = self.precision + self.noise_precision * X.T @ X
        self.shift = self.shift + self.noise_precision * X.T @ y
        self._mean = cho_solve(cho_factor(self.precision), self.shift)
        self.num_observations += len(rows)
        return self

    def predict(self, model_id: str, k: int, width: int = 1) -> float:
        value = float(self.features(model_id, k, width) @ self._mean)
        return max(self.MIN_PREDICTION, value)


def fit_latency(model: LatencyModel, observations: Sequence[LatencyObservation]) -> LatencyModel:
    """Posterior after observations, leaving the input model untouched."""
    if len(observations) < 1:
        raise DomainError("fit_latency needs at least one observation")
    return copy.deepcopy(model).update(observations)


def predict_cost(model: LatencyModel, model_id: str, k: int, width: int = 1) -> float:
    """Predicted total cost of one call drafting k tokens (clamped at 1e-4)."""
    return model.predict(model_id, k, width)
