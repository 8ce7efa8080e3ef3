"""
Paired-seed ensembles of decode sessions.

Every scheduler runs on every seed; a seed fixes the truth stream, so the
schedulers of one seed face identical text. Sessions fan out across worker
threads and are merged back in (seed, scheduler) order, which keeps the
tables independent of the worker count.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence
import logging

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from scipy.stats import norm

from config import Config
from scheduling.base import Scheduler
from utils.exceptions import ConfigError
from .decode_runner import SimResult, run_decode
from .scenario import Scenario

logger = logging.getLogger(__name__)

CONFIDENCE = 0.95


@dataclass
class EnsembleResult:
    runs: pd.DataFrame
    summary: pd.DataFrame
    results: List[SimResult] = field(default_factory=list, repr=False)


def summarize(runs: pd.DataFrame, value: str = 'empirical_ewif') -> pd.DataFrame:
    """Mean, standard deviation and normal-approximation interval per scheduler."""
    z = float(norm.ppf(0.5 + CONFIDENCE / 2))
    grouped = runs.groupby('scheduler', sort=False)[value]
    summary = pd.DataFrame({
        'seeds': grouped.count(),
        'mean': grouped.mean(),
        'std': grouped.std(ddof=1).fillna(0.0),
    })
    half_width = z * summary['std'] / np.sqrt(summary['seeds'])
    summary['ci_low'] = summary['mean'] - half_width
    summary['ci_high'] = summary['mean'] + half_width
    return summary.reset_index()


def run_ensemble(scenario: Scenario, schedulers: Sequence[Scheduler], seeds: Sequence[int],
                 workers: Optional[int] = None, keep_step_log: bool = False) -> EnsembleResult:
    """
    Run every scheduler on every seed.

    Raises:
        ConfigError: no schedulers, no seeds, or duplicate scheduler names
    """
    if not schedulers:
        raise ConfigError("ensemble needs at least one scheduler")
    if not seeds:
        raise ConfigError("ensemble needs at least one seed")
    names = [s.name for s in schedulers]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise ConfigError("scheduler names must be unique", [f"duplicate {n!r}" for n in duplicates])

    workers = workers or Config.WORKERS
    jobs = [(seed, scheduler) for seed in seeds for scheduler in schedulers]
    logger.info(f"Ensemble on {scenario.name}: {len(schedulers)} schedulers x {len(seeds)} seeds, "
                f"{workers} workers")

    results = Parallel(n_jobs=workers, prefer='threads')(
        delayed(run_decode)(scenario, scheduler, seed, keep_step_log) for seed, scheduler in jobs
    )

    runs = pd.DataFrame([r.to_row() for r in results])
    summary = summarize(runs)
    return EnsembleResult(runs=runs, summary=summary, results=list(results))


def compare_to_baseline(runs: pd.DataFrame, baseline: str) -> pd.DataFrame:
    """
    Per-seed EWIF ratios against the baseline scheduler, summarized per scheduler.

    The baseline row is 1.0 exactly because each seed is divided by itself.
    """
    if baseline not in set(runs['scheduler']):
        raise ConfigError(f"baseline {baseline!r} is not among the schedulers",
                          [f"known: {sorted(set(runs['scheduler']))}"])
    table = runs.pivot(index='seed', columns='scheduler', values='empirical_ewif')
    ratios = table.div(table[baseline], axis=0)
    ratios.columns.name = None
    order = list(dict.fromkeys(runs['scheduler']))
    long = ratios.reset_index().melt(id_vars='seed', var_name='scheduler', value_name='speedup')
    summary = summarize(long, value='speedup').set_index('scheduler').loc[order].reset_index()
    summary['wins'] = [int((ratios[name] > 1.0).sum()) for name in order]
    return summary
