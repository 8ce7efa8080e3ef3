"""
Draft scheduling for cascade speculative decoding.

This module contains:
- Candidate configurations (single models and vertical cascades)
- The DyTC and greedy objectives and their argmax search
- The dynamic tree schedulers (DyTC, greedy)
- Static baselines (autoregressive, SD, HC, VC, HC+VC, chain tree)
- A factory building schedulers from config specs
"""

from .params import SchedulerParams
from .candidates import CandidateConfig, build_candidates, single, vertical
from .objectives import (
    ConfigChoice,
    dytc_objective,
    expected_accepted,
    find_best_config,
    find_best_greedy,
    greedy_objective,
)
from .estimates import EstimateProvider
from .executor import Charge, DraftExecutor, DraftOutcome
from .base import Expansion, Scheduler, TreeBuild
from .dynamic import DyTCScheduler, GreedyScheduler, dytc_generate, expand_tree, greedy_schedule
from .static import (
    AutoregressiveScheduler,
    ChainTreeScheduler,
    HCScheduler,
    HCVCScheduler,
    SDScheduler,
    VCScheduler,
    static_schedule,
)
from .factory import SCHEDULER_KINDS, make_scheduler

__all__ = [
    'SchedulerParams',
    'CandidateConfig',
    'build_candidates',
    'single',
    'vertical',
    'ConfigChoice',
    'dytc_objective',
    'expected_accepted',
    'find_best_config',
    'find_best_greedy',
    'greedy_objective',
    'EstimateProvider',
    'Charge',
    'DraftExecutor',
    'DraftOutcome',
    'Expansion',
    'Scheduler',
    'TreeBuild',
    'DyTCScheduler',
    'GreedyScheduler',
    'dytc_generate',
    'expand_tree',
    'greedy_schedule',
    'AutoregressiveScheduler',
    'ChainTreeScheduler',
    'HCScheduler',
    'HCVCScheduler',
    'SDScheduler',
    'VCScheduler',
    'static_schedule',
    'SCHEDULER_KINDS',
    'make_scheduler'
]
