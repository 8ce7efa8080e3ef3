"""
Cold-start calibration of acceptance estimates.

Every model in the hierarchy is exercised round-robin: draft one token,
let the target verify it, record the first-token outcome. Calibration is
real decoding, so emitted tokens are committed and all costs are charged.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple
import logging

import numpy as np

from drafting.drafters import draft_step, verify_path
from drafting.model_spec import Hierarchy
from drafting.prompt_lookup import PromptLookup
from drafting.token_stream import DEFAULT_VOCAB_SIZE, TokenStream
from utils.exceptions import DomainError
from .alpha_estimator import ConfigCatalog, heuristic_priors
from .latency_model import LatencyObservation

logger = logging.getLogger(__name__)

TARGET_ID = 'target'


@dataclass
class CalibrationResult:
    catalog: ConfigCatalog
    position: int
    tokens: List[int] = field(default_factory=list)
    cost_units: float = 0.0
    cycles: int = 0
    charges: List[Tuple[str, str, float]] = field(default_factory=list)
    observations: List[LatencyObservation] = field(default_factory=list)


def calibrate(catalog: ConfigCatalog, hierarchy: Hierarchy, truth: TokenStream, steps: int,
              rng: Optional[np.random.Generator] = None, start_position: int = 0,
              lookup: Optional[PromptLookup] = None, max_tokens: Optional[int] = None,
              vocab_size: int = DEFAULT_VOCAB_SIZE) -> CalibrationResult:
    """
    Seed estimators with heuristic priors, then run `steps` verify cycles per model.

    Args:
        lookup: prompt-lookup index over the committed context; extended in place
        max_tokens: stop once this many tokens have been emitted (overshoot dropped)

    Returns:
        CalibrationResult with the updated catalog and the ledger of the run
    """
    if steps < 0:
        raise DomainError(f"calibration steps must be >= 0, got {steps}")

    for model in hierarchy.models:
        if model.id not in catalog:
            catalog.register(model.id)
    catalog.seed_priors(heuristic_priors(hierarchy))

    result = CalibrationResult(catalog=catalog, position=start_position)
    if steps == 0:
        return result

    rng = rng if rng is not None else np.random.default_rng(0)
    if lookup is None:
        lookup = PromptLookup(tokens=truth.slice(0, start_position))

    for _ in range(steps):
        for model in hierarchy.models:
            if max_tokens is not None and len(result.tokens) >= max_tokens:
                break
            position = result.position
            if model.is_neural:
                draft = draft_step(model, truth, position, 1, rng, vocab_size=vocab_size)
            else:
                draft = lookup.draft(1, cost=model.cost, model_id=model.id)

            accepted, bonus = verify_path(truth, position, draft.tokens)
            if draft.tokens:
                catalog.record_first_token_outcome(model.id, accepted >= 1)

            emitted = list(draft.tokens[:accepted]) + [bonus]
            if max_tokens is not None:
                emitted = emitted[:max_tokens - len(result.tokens)]
            lookup.extend(emitted)
            result.tokens.extend(emitted)
            result.position += len(emitted)

            result.charges.append((model.id, 'calibration_draft', draft.cost_units))
            result.charges.append((TARGET_ID, 'verify', 1.0))
            result.cost_units += draft.cost_units + 1.0
            result.observations.append(LatencyObservation(model.id, 1, 1, draft.cost_units))
            result.cycles += 1

    logger.info(f"Calibration: {result.cycles} cycles, {len(result.tokens)} tokens, "
                f"estimates {catalog.snapshot()}")
    return result
