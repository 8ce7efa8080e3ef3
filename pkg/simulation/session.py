"""
Per-seed decode session state.
"""

from typing import Dict, List, Sequence, Tuple
import logging
import math

from drafting.prompt_lookup import PromptLookup
from estimation.alpha_estimator import ConfigCatalog, heuristic_priors
from estimation.calibration import calibrate
from estimation.latency_model import LatencyModel, LatencyObservation
from scheduling.estimates import EstimateProvider
from scheduling.executor import DraftExecutor
from scheduling.params import SchedulerParams
from utils.rng import derive_streams
from .scenario import Scenario

logger = logging.getLogger(__name__)

BOS_TOKEN = -1

LedgerEntry = Tuple[int, str, str, float]


class CostLedger:
    """Every charged model call as (cycle, model id, kind, units)."""

    def __init__(self):
        self.entries: List[LedgerEntry] = []
        self.total = 0.0

    def __len__(self) -> int:
        return len(self.entries)

    def charge(self, cycle: int, model_id: str, kind: str, units: float) -> None:
        self.entries.append((cycle, model_id, kind, float(units)))
        self.total += units

    def audit(self) -> float:
        """Exact re-summation of the logged charges."""
        return math.fsum(entry[3] for entry in self.entries)

    def by_model(self) -> Dict[str, float]:
        totals: Dict[str, float] = {}
        for _, model_id, _, units in self.entries:
            totals[model_id] = totals.get(model_id, 0.0) + units
        return totals


class DecodeSession:
    """Truth stream, estimators, executor and ledger for one seeded run."""

    def __init__(self, scenario: Scenario, params: SchedulerParams, seed: int):
        self.scenario = scenario
        self.params = params
        self.seed = seed
        self.hierarchy = scenario.hierarchy

        self.streams = derive_streams(seed)
        self.truth = scenario.make_truth(self.streams.truth_seed)
        self.prompt = self.truth.slice(0, scenario.prompt_length)
        self.position = scenario.prompt_length
        self.decoded: List[int] = []
        self.cycle = 0

        bottom = self.hierarchy.bottom_model
        self.lookup = PromptLookup(max_ngram=bottom.max_ngram, tokens=self.prompt)

        self.catalog = ConfigCatalog(params.ema_window, params.ema_smoothing)
        for model in self.hierarchy.models:
            self.catalog.register(model.id)
        self.catalog.seed_priors(heuristic_priors(self.hierarchy))

        self.latency = LatencyModel.from_hierarchy(self.hierarchy)
        self._pending: List[LatencyObservation] = []

        self.executor = DraftExecutor(self.hierarchy, self.truth, self.streams.draft, self.lookup,
                                      scenario.vocab_size, params.vc_inner_k)
        self.estimates = EstimateProvider(params.estimates, self.hierarchy, self.catalog,
                                          self.latency, params.vc_inner_k)
        self.ledger = CostLedger()

    @property
    def horizon(self) -> int:
        return self.scenario.horizon

    @property
    def remaining(self) -> int:
        return self.horizon - len(self.decoded)

    @property
    def done(self) -> bool:
        return self.remaining <= 0

    @property
    def root_token(self) -> int:
        """The last committed token: last bonus, last prompt token, or BOS."""
        if self.decoded:
            return self.decoded[-1]
        if self.prompt:
            return self.prompt[-1]
        return BOS_TOKEN

    def ensure_registered(self, config_id: str, estimator_key: str) -> None:
        if config_id not in self.catalog:
            self.catalog.register(config_id, key=estimator_key or config_id)

    def commit(self, tokens: Sequence[int]) -> List[int]:
        """Append verified tokens, dropping any overshoot past the horizon."""
        committed = list(tokens[:max(0, self.remaining)])
        self.decoded.extend(committed)
        self.lookup.extend(committed)
        self.position += len(committed)
        return committed

    def observe(self, observations: Sequence[LatencyObservation]) -> None:
        """Queue latency observations; the posterior is refit every few cycles."""
        self._pending.extend(observations)
        if self._pending and self.cycle % self.params.latency_refit_every == 0:
            self.latency.update(self._pending)
            self._pending = []

    def run_calibration(self) -> int:
        """Cold-start calibration as real decoding; returns the cycles it used."""
        result = calibrate(self.catalog, self.hierarchy, self.truth, self.params.calibration_steps,
                           rng=self.streams.scheduler, start_position=self.position,
                           lookup=self.lookup, max_tokens=self.remaining,
                           vocab_size=self.scenario.vocab_size)
        # calibrate already extended the lookup index with what it emitted
        self.decoded.extend(result.tokens)
        self.position = result.position
        # two charges per calibration cycle: the draft and its verification
        for i, (model_id, kind, units) in enumerate(result.charges):
            self.ledger.charge(self.cycle + i // 2, model_id, kind, units)
        self.cycle += result.cycles
        self.latency.update(result.observations)
        logger.debug(f"Calibration committed {len(result.tokens)} tokens in {result.cycles} cycles")
        return result.cycles

