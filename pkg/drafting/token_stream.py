"""
Synthetic target-output streams.

A TokenStream stands in for the target model's greedy continuation. The
generator mixes an order-2 Markov chain with verbatim-copy segments; the
copy rate (repeat_bias) controls how often prompt lookup finds a match.
"""

from dataclasses import dataclass, field
from typing import Sequence, Tuple
import logging

import numpy as np

from utils.exceptions import DomainError, StreamOverflowError

logger = logging.getLogger(__name__)

DEFAULT_VOCAB_SIZE = 256
MIN_PERIOD = 16
MAX_PERIOD = 48
MIN_SEGMENT = 8
MAX_SEGMENT = 32
MARKOV_STICKINESS = 0.3


@dataclass(frozen=True)
class TokenStream:
    """Deterministic ground-truth token sequence."""
    tokens: Tuple[int, ...] = field(repr=False)
    seed: int
    repeat_bias: float
    period: int
    vocab_size: int = DEFAULT_VOCAB_SIZE

    def __len__(self) -> int:
        return len(self.tokens)

    def token_at(self, position: int) -> int:
        if position < 0 or position >= len(self.tokens):
            raise StreamOverflowError(
                f"position {position} outside truth stream of length {len(self.tokens)}"
            )
        return self.tokens[position]

    def slice(self, start: int, stop: int) -> Tuple[int, ...]:
        if start < 0 or stop > len(self.tokens):
            raise StreamOverflowError(
                f"slice [{start}, {stop}) outside truth stream of length {len(self.tokens)}"
            )
        return self.tokens[start:stop]


def make_corpus(seed: int, length: int, repeat_bias: float,
                vocab_size: int = DEFAULT_VOCAB_SIZE,
                stickiness: float = MARKOV_STICKINESS) -> TokenStream:
    """
    Build a truth stream.

    The first `period` tokens are Markov warmup. After that the stream is cut
    into segments of 8-32 tokens; each segment is, with probability
    repeat_bias, a verbatim copy of the tokens one period back, otherwise
    fresh Markov output. repeat_bias = 1 therefore yields a stream that is
    periodic after warmup.
    """
    if length < 1:
        raise DomainError(f"length must be >= 1, got {length}")
    if not 0.0 <= repeat_bias <= 1.0:
        raise DomainError(f"repeat_bias must be in [0, 1], got {repeat_bias}")
    if vocab_size < 2:
        raise DomainError(f"vocab_size must be >= 2, got {vocab_size}")

    rng = np.random.default_rng(seed)
    period = int(rng.integers(MIN_PERIOD, MAX_PERIOD + 1))
    preferred = rng.integers(0, vocab_size, size=(vocab_size, vocab_size))
    sticky = (rng.random(length) < stickiness).tolist()
    fresh = rng.integers(0, vocab_size, size=length).tolist()

    tokens = [0] * length

    def markov(t: int) -> int:
        if t >= 2 and sticky[t]:
            return int(preferred[tokens[t - 2], tokens[t - 1]])
        return fresh[t]

    warmup = min(period, length)
    for t in range(warmup):
        tokens[t] = markov(t)

    t = warmup
    copy_segments = 0
    while t < length:
        end = min(length, t + int(rng.integers(MIN_SEGMENT, MAX_SEGMENT + 1)))
        if rng.random() < repeat_bias:
            copy_segments += 1
            for i in range(t, end):
                tokens[i] = tokens[i - period]
        else:
            for i in range(t, end):
                tokens[i] = markov(i)
        t = end

    logger.debug(f"Corpus seed={seed} length={length} period={period} copy_segments={copy_segments}")
    return TokenStream(tuple(tokens), seed=seed, repeat_bias=repeat_bias,
                       period=period, vocab_size=vocab_size)


def is_prefix_of(decoded: Sequence[int], stream: TokenStream, start: int = 0) -> bool:
    """True when decoded equals the stream slice beginning at start."""
    end = start + len(decoded)
    if end > len(stream):
        return False
    return tuple(decoded) == stream.tokens[start:end]
