"""
Single-round draft and verify primitives.

Drafted tokens are scored against a TokenReference: the truth stream when
the target verifies, or a ModelReference when a higher draft model verifies
a lower one inside a vertical cascade. Acceptance is an i.i.d. Bernoulli
draw per token; a rejected token is replaced by a token that is guaranteed
to differ from the reference.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Protocol, Sequence, Tuple
import logging

import numpy as np

from utils.exceptions import DomainError
from .model_spec import ModelSpec
from .token_stream import DEFAULT_VOCAB_SIZE

logger = logging.getLogger(__name__)

# Chance that the reference token shows up at rank 1 when rank 0 is wrong
SIBLING_RECALL = 0.5


class TokenReference(Protocol):
    """Anything that can say which token belongs at a stream position."""

    def token_at(self, position: int) -> int:
        ...


@dataclass
class DraftResult:
    """Output of one draft call.

    candidates/candidate_probs hold one row per drafted position (rank 0 is
    the drafted token) when the drafter was asked for K > 1 candidates.
    """
    tokens: List[int]
    confidences: List[float]
    cost_units: float
    model_id: str = ''
    candidates: Optional[List[List[int]]] = None
    candidate_probs: Optional[List[List[float]]] = None

    def __post_init__(self):
        if len(self.tokens) != len(self.confidences):
            raise DomainError("draft result needs one confidence per token")

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def is_empty(self) -> bool:
        return not self.tokens


def _clip_unit(value: float) -> float:
    return min(1.0, max(0.0, value))


def _wrong_token(reference_token: int, vocab_size: int, rng: np.random.Generator) -> int:
    return int((reference_token + 1 + rng.integers(vocab_size - 1)) % vocab_size)


def _emit_token(alpha: float, reference_token: int, noise: float, vocab_size: int,
                rng: np.random.Generator) -> Tuple[int, float, bool]:
    """Draw one drafted token: (token, confidence, matches_reference).

    Draw order is fixed (acceptance, wrong token if rejected, noise if any)
    so equivalent schedules consume the generator identically.
    """
    accepted = bool(rng.random() < alpha)
    token = reference_token if accepted else _wrong_token(reference_token, vocab_size, rng)
    confidence = alpha
    if noise > 0:
        confidence = _clip_unit(alpha + noise * rng.standard_normal())
    return token, confidence, accepted


def _candidate_row(token: int, confidence: float, reference_token: int, accepted: bool,
                   num_candidates: int, vocab_size: int,
                   rng: np.random.Generator) -> Tuple[List[int], List[float]]:
    row = [token]
    if not accepted and rng.random() < SIBLING_RECALL:
        row.append(reference_token)
    # a wrong row never holds the reference, so a tiny vocabulary caps the row
    size = min(num_candidates, vocab_size if reference_token in row else vocab_size - 1)
    while len(row) < size:
        candidate = int(rng.integers(vocab_size))
        if candidate not in row and candidate != reference_token:
            row.append(candidate)
    if len(row) == 1:
        return row, [confidence]

    weights = np.array([0.5 ** j for j in range(1, len(row))])
    residual = (1.0 - confidence) * weights / weights.sum()
    return row, [confidence] + residual.tolist()


class ModelReference:
    """A draft model's own greedy tokens, sampled lazily against a parent reference.

    Used as the verifier inside a vertical cascade: the lower model's
    drafts are checked against these tokens, and the tokens themselves are
    what the target eventually sees.
    """

    def __init__(self, model: ModelSpec, parent: TokenReference, rng: np.random.Generator,
                 vocab_size: int = DEFAULT_VOCAB_SIZE, parent_id: Optional[str] = None):
        self.model = model
        self.parent = parent
        self.rng = rng
        self.vocab_size = vocab_size
        self.parent_id = parent_id
        self._tokens: Dict[int, Tuple[int, float]] = {}

    @property
    def id(self) -> str:
        return self.model.id

    def _sample(self, position: int) -> Tuple[int, float]:
        if position not in self._tokens:
            reference_token = self.parent.token_at(position)
            alpha = self.model.alpha_at(position, verifier=self.parent_id)
            token, confidence, _ = _emit_token(alpha, reference_token, self.model.confidence_noise,
                                               self.vocab_size, self.rng)
            self._tokens[position] = (token, confidence)
        return self._tokens[position]

    def token_at(self, position: int) -> int:
        return self._sample(position)[0]

    def confidence_at(self, position: int) -> float:
        return self._sample(position)[1]


def draft_step(model: ModelSpec, reference: TokenReference, position: int, k: int,
               rng: np.random.Generator, num_candidates: int = 1,
               vocab_size: int = DEFAULT_VOCAB_SIZE,
               verifier: Optional[str] = None) -> DraftResult:
    """
    Draft k tokens with a neural-sim model starting at position.

    verifier names the model whose tokens `reference` holds (None for the
    target); it selects the acceptance rate used for each token.
    """
    if not model.is_neural:
        raise DomainError(f"draft_step needs a neural_sim model, got {model.kind.value} ({model.id!r})")
    if k < 1:
        raise DomainError(f"draft length k must be >= 1, got {k}")
    if num_candidates < 1:
        raise DomainError(f"num_candidates must be >= 1, got {num_candidates}")

    tokens, confidences = [], []
    rows, probs = [], []
    for i in range(k):
        reference_token = reference.token_at(position + i)
        alpha = model.alpha_at(position + i, verifier=verifier)
        token, confidence, accepted = _emit_token(alpha, reference_token, model.confidence_noise,
                                                  vocab_size, rng)
        tokens.append(token)
        confidences.append(confidence)
        if num_candidates > 1:
            row, row_probs = _candidate_row(token, confidence, reference_token, accepted,
                                            num_candidates, vocab_size, rng)
            rows.append(row)
            probs.append(row_probs)

    return DraftResult(
        tokens=tokens,
        confidences=confidences,
        cost_units=model.cost * k,
        model_id=model.id,
        candidates=rows if num_candidates > 1 else None,
        candidate_probs=probs if num_candidates > 1 else None,
    )


def verify_path(reference: TokenReference, position: int,
                path_tokens: Sequence[int]) -> Tuple[int, int]:
    """Longest matching prefix of path_tokens and the verifier's next token after it."""
    accepted = 0
    for token in path_tokens:
        if reference.token_at(position + accepted) != token:
            break
        accepted += 1
    return accepted, reference.token_at(position + accepted)
