"""
Seeded random streams for reproducible simulations.

A master seed is split into independent sub-streams so that every scheduler
run with the same seed faces the same truth stream (paired comparisons),
while its own draft and tie-break draws stay isolated.
"""

from dataclasses import dataclass

import numpy as np

STREAM_NAMES = ('truth', 'draft', 'scheduler')


@dataclass(frozen=True)
class SessionStreams:
    """Independent generators derived from one master seed."""
    seed: int
    truth_seed: int
    draft: np.random.Generator
    scheduler: np.random.Generator


def derive_streams(seed: int) -> SessionStreams:
    """Split a master seed into truth, draft and scheduler sub-streams."""
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    truth_ss, draft_ss, scheduler_ss = np.random.SeedSequence(seed).spawn(len(STREAM_NAMES))
    # The truth stream is regenerated from an integer seed by make_corpus
    truth_seed = int(truth_ss.generate_state(1, dtype=np.uint32)[0])
    return SessionStreams(
        seed=seed,
        truth_seed=truth_seed,
        draft=np.random.default_rng(draft_ss),
        scheduler=np.random.default_rng(scheduler_ss),
    )


def make_rng(seed: int | None) -> np.random.Generator:
    """Generator for standalone use (tests, calibration, analytics oracles)."""
    return np.random.default_rng(seed)
