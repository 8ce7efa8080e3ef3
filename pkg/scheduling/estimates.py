"""
Acceptance and cost estimates fed to the schedulers.

online:  acceptance from the configuration catalog (EMA of first-token
         outcomes), per-token cost from the latency posterior
perfect: true acceptance of the top model at the current position and
         nominal cost coefficients

A vertical cascade's per-token cost is the cost of one outer round (one
top-model verification plus the inner drafting) divided by the expected
number of tokens the round yields.
"""

from typing import Tuple
import logging

from calculations.helpers import geometric_sum
from drafting.model_spec import Hierarchy, ModelSpec
from estimation.alpha_estimator import ConfigCatalog, heuristic_priors
from estimation.latency_model import LatencyModel
from utils.exceptions import ConfigError
from .candidates import CandidateConfig, single

logger = logging.getLogger(__name__)


class EstimateProvider:
    """Looks up (alpha, cost) estimates for candidate configurations."""

    def __init__(self, mode: str, hierarchy: Hierarchy, catalog: ConfigCatalog,
                 latency: LatencyModel, vc_inner_k: int = 4):
        if mode not in ('online', 'perfect'):
            raise ConfigError(f"unknown estimate mode {mode!r}")
        self.mode = mode
        self.hierarchy = hierarchy
        self.catalog = catalog
        self.latency = latency
        self.vc_inner_k = vc_inner_k
        self.bottom_prior = heuristic_priors(hierarchy)[hierarchy.bottom_model.id]

    def register(self, config: CandidateConfig) -> None:
        """Alias the configuration to its top model's estimator."""
        if config.id not in self.catalog:
            self.catalog.register(config.id, key=config.estimator_key)

    def _model(self, model_id: str) -> ModelSpec:
        return self.hierarchy.get(model_id)

    def alpha(self, config: CandidateConfig, position: int) -> float:
        if self.mode == 'perfect':
            return self._model(config.top).alpha_at(position)
        self.register(config)
        return self.catalog.alpha(config.id)

    def _relative_alpha(self, lower: str, upper: str, position: int) -> float:
        if self.mode == 'perfect':
            return self._model(lower).alpha_at(position, verifier=upper)
        return self.catalog.alpha(lower)

    def model_cost(self, model_id: str, width: int = 1) -> float:
        """Per-call cost of drafting one token with a single model."""
        if self.mode == 'perfect':
            return self._model(model_id).cost
        return self.latency.predict(model_id, 1, width)

    def cost(self, config: CandidateConfig, width: int = 1, position: int = 0) -> float:
        """Expected cost per drafted token."""
        if not config.is_cascade:
            return self.model_cost(config.top, width)

        inner = config.inner
        top_cost = self.model_cost(config.top, width)
        inner_alpha = self._relative_alpha(inner.top, config.top, position)
        if self._model(inner.top).is_neural or inner.is_cascade:
            sub_cost = self.vc_inner_k * self.cost(inner, width, position)
        else:
            # prompt lookup is charged flat per call
            sub_cost = self.model_cost(inner.top, width)
        tokens_per_round = geometric_sum(inner_alpha, self.vc_inner_k + 1)
        return (top_cost + sub_cost) / tokens_per_round

    def bottom(self, position: int) -> Tuple[float, float]:
        """(alpha, cost) of the bottom draft, the least-future-speedup term.

        Online, the acceptance never drops below the bottom draft's cold-start
        prior: its estimator only learns when it is drafted at the root, so a
        collapsed estimate would otherwise keep the stop rule firing at the root
        forever.
        """
        bottom = single(self.hierarchy.bottom_model.id)
        alpha = self.alpha(bottom, position)
        if self.mode == 'online':
            alpha = max(alpha, self.bottom_prior)
        return alpha, self.cost(bottom, position=position)
