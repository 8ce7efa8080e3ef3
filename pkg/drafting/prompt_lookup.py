"""
Prompt lookup decoding (PLD): the n-gram bottom draft.

Matches the longest suffix n-gram of the context against earlier text and
proposes the tokens that followed its most recent earlier occurrence.
"""

from typing import Dict, Iterable, List, Sequence, Tuple
import logging

from utils.exceptions import DomainError
from .drafters import DraftResult
from .model_spec import DEFAULT_MAX_NGRAM, DEFAULT_PLD_COST

logger = logging.getLogger(__name__)

MIN_NGRAM = 2


class PromptLookup:
    """Incremental n-gram index over committed tokens.

    For every n-gram only the two most recent start positions are kept,
    which is enough to find the most recent occurrence that is not the
    context suffix itself.
    """

    def __init__(self, max_ngram: int = DEFAULT_MAX_NGRAM, min_ngram: int = MIN_NGRAM,
                 tokens: Iterable[int] = ()):
        if min_ngram < MIN_NGRAM or max_ngram < min_ngram:
            raise DomainError(f"need {MIN_NGRAM} <= min_ngram <= max_ngram, got {min_ngram}, {max_ngram}")
        self.max_ngram = max_ngram
        self.min_ngram = min_ngram
        self.tokens: List[int] = []
        self._starts: Dict[Tuple[int, ...], Tuple[int, int]] = {}
        self.extend(tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def extend(self, new_tokens: Iterable[int]) -> None:
        for token in new_tokens:
            self.tokens.append(int(token))
            end = len(self.tokens)
            for n in range(self.min_ngram, self.max_ngram + 1):
                if end < n:
                    break
                key = tuple(self.tokens[end - n:end])
                previous = self._starts.get(key, (-1, -1))[1]
                self._starts[key] = (previous, end - n)

    def propose(self, k: int, suffix: Sequence[int] = ()) -> Tuple[List[int], int]:
        """
        Draft up to k tokens for the context tokens + suffix.

        Returns:
            (drafted tokens, matched n-gram length); ([], 0) when nothing matches
        """
        committed = len(self.tokens)
        length = committed + len(suffix)

        def at(i: int) -> int:
            return self.tokens[i] if i < committed else suffix[i - committed]

        for n in range(self.max_ngram, self.min_ngram - 1, -1):
            if length < n + 1:
                continue
            key = tuple(at(i) for i in range(length - n, length))
            for start in reversed(self._starts.get(key, (-1, -1))):
                # the suffix itself has start + n == length
                if 0 <= start and start + n < length:
                    take = min(k, length - (start + n))
                    return [at(start + n + j) for j in range(take)], n
        return [], 0

    def draft(self, k: int, suffix: Sequence[int] = (), cost: float = DEFAULT_PLD_COST,
              model_id: str = 'pld') -> DraftResult:
        """DraftResult wrapper; the flat cost is charged whether or not a match is found."""
        tokens, match_len = self.propose(k, suffix)
        confidence = min(1.0, match_len / self.max_ngram) if tokens else 0.0
        return DraftResult(tokens=tokens, confidences=[confidence] * len(tokens),
                           cost_units=cost, model_id=model_id)


def pld_draft(prefix: Sequence[int], max_ngram: int = DEFAULT_MAX_NGRAM, k: int = 1,
              cost: float = DEFAULT_PLD_COST) -> DraftResult:
    """Prompt-lookup draft for a whole prefix; an empty result means no match."""
    if len(prefix) < 1:
        raise DomainError("prefix must contain at least one token")
    lookup = PromptLookup(max_ngram=max_ngram, tokens=prefix)
    return lookup.draft(k, cost=cost)
