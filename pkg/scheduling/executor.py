"""
Runs one draft call for a candidate configuration.

Single models draft directly against the truth stream (neural-sim) or the
prompt-lookup index (bottom draft). A vertical cascade VC(top, inner) runs
rounds of sub-speculation: the inner configuration drafts, the top model
verifies against its own lazily sampled tokens, and the accepted prefix plus
the top model's bonus token is what the round yields. Every model call is
recorded as a Charge so the session ledger can be audited.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence
import logging

import numpy as np

from drafting.drafters import ModelReference, TokenReference, draft_step, verify_path
from drafting.model_spec import Hierarchy
from drafting.prompt_lookup import PromptLookup
from drafting.token_stream import DEFAULT_VOCAB_SIZE
from estimation.latency_model import LatencyObservation
from utils.exceptions import DomainError
from .candidates import CandidateConfig

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Charge:
    model_id: str
    kind: str
    units: float

    def as_record(self) -> dict:
        return {'model': self.model_id, 'kind': self.kind, 'units': self.units}


@dataclass
class DraftOutcome:
    config_id: str
    estimator_key: str = ''
    tokens: List[int] = field(default_factory=list)
    confidences: List[float] = field(default_factory=list)
    candidates: Optional[List[List[int]]] = None
    candidate_probs: Optional[List[List[float]]] = None
    charges: List[Charge] = field(default_factory=list)
    observations: List[LatencyObservation] = field(default_factory=list)
    rounds: int = 0

    @property
    def cost_units(self) -> float:
        return sum(c.units for c in self.charges)

    @property
    def is_empty(self) -> bool:
        return not self.tokens


class DraftExecutor:
    """Executes configurations against the truth stream for one session."""

    def __init__(self, hierarchy: Hierarchy, truth: TokenReference, rng: np.random.Generator,
                 lookup: PromptLookup, vocab_size: int = DEFAULT_VOCAB_SIZE, vc_inner_k: int = 4):
        self.hierarchy = hierarchy
        self.truth = truth
        self.rng = rng
        self.lookup = lookup
        self.vocab_size = vocab_size
        self.vc_inner_k = vc_inner_k

    def draft(self, config: CandidateConfig, position: int, k: int, suffix: Sequence[int] = (),
              num_candidates: int = 1, width: int = 1, rounds: Optional[int] = None,
              inner_k: Optional[int] = None) -> DraftOutcome:
        """
        Draft for the stream position right after the committed context plus suffix.

        Args:
            k: tokens to draft; for a cascade, the minimum number of
               top-verified tokens (dynamic mode)
            suffix: drafted tokens on the tree path between the committed
                    context and position (prompt lookup matches across them)
            rounds: fixed number of cascade rounds (static mode)
            inner_k: inner draft length per cascade round (default vc_inner_k)
        """
        if k < 0 or (k == 0 and rounds is None):
            raise DomainError(f"draft length must be >= 1, got {k}")
        if config.is_cascade:
            return self._cascade(config, self.truth, None, position, k, suffix, width,
                                 rounds, self.vc_inner_k if inner_k is None else inner_k)
        return self._single(config, self.truth, None, position, k, suffix, num_candidates, width)

    def _single(self, config: CandidateConfig, reference: TokenReference, verifier: Optional[str],
                position: int, k: int, suffix: Sequence[int], num_candidates: int,
                width: int) -> DraftOutcome:
        model = self.hierarchy.get(config.top)
        outcome = DraftOutcome(config_id=config.id, estimator_key=config.estimator_key, rounds=1)
        if model.is_neural:
            result = draft_step(model, reference, position, k, self.rng,
                                num_candidates=num_candidates, vocab_size=self.vocab_size,
                                verifier=verifier)
            outcome.candidates = result.candidates
            outcome.candidate_probs = result.candidate_probs
        else:
            result = self.lookup.draft(k, suffix, cost=model.cost, model_id=model.id)
        outcome.tokens = list(result.tokens)
        outcome.confidences = list(result.confidences)
        outcome.charges.append(Charge(model.id, 'draft', result.cost_units))
        outcome.observations.append(LatencyObservation(model.id, k if model.is_neural else 1,
                                                       width, result.cost_units))
        return outcome

    def _cascade(self, config: CandidateConfig, reference: TokenReference, verifier: Optional[str],
                 position: int, k: int, suffix: Sequence[int], width: int,
                 rounds: Optional[int], inner_k: int) -> DraftOutcome:
        top = self.hierarchy.get(config.top)
        if not top.is_neural:
            raise DomainError(f"cascade top model {top.id!r} must be neural_sim")
        inner = config.inner
        top_ref = ModelReference(top, reference, self.rng, self.vocab_size, parent_id=verifier)
        outcome = DraftOutcome(config_id=config.id, estimator_key=config.estimator_key)
        pos = position

        while True:
            if rounds is not None and outcome.rounds >= rounds:
                break
            if rounds is None and len(outcome.tokens) >= k:
                break

            context = list(suffix) + outcome.tokens
            inner_tokens: List[int] = []
            if inner_k > 0:
                if inner.is_cascade:
                    sub = self._cascade(inner, top_ref, top.id, pos, inner_k, context, width,
                                        None, self.vc_inner_k)
                else:
                    sub = self._single(inner, top_ref, top.id, pos, inner_k, context, 1, width)
                outcome.charges.extend(sub.charges)
                outcome.observations.extend(sub.observations)
                inner_tokens = sub.tokens

            accepted, bonus = verify_path(top_ref, pos, inner_tokens)
            emitted = list(inner_tokens[:accepted]) + [bonus]
            outcome.tokens.extend(emitted)
            outcome.confidences.extend(top_ref.confidence_at(pos + i) for i in range(len(emitted)))
            outcome.charges.append(Charge(top.id, 'verify', top.cost))
            outcome.observations.append(LatencyObservation(top.id, 1, width, top.cost))
            outcome.rounds += 1
            pos += len(emitted)

            if rounds is None and accepted == 0:
                break

        logger.debug(f"{config.id}: {outcome.rounds} rounds, {len(outcome.tokens)} tokens, "
                     f"cost {outcome.cost_units:.4f}")
        return outcome
