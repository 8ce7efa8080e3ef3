"""
Decode-session simulation.

This module contains:
- Scenario presets (hierarchy, truth-stream recipe, horizon)
- The session state and cost ledger of one seeded run
- The decode loop and its result record
- Paired-seed ensembles and baseline comparisons
- Vectorized Monte Carlo oracles for the closed-form EWIF
"""

from .scenario import PRESETS, Regime, Scenario, build_hierarchy, make_scenario
from .session import CostLedger, DecodeSession
from .decode_runner import SimResult, run_decode
from .ensemble import EnsembleResult, compare_to_baseline, run_ensemble, summarize
from .monte_carlo import McEstimate, mc_ewif_hc, mc_ewif_sd, mc_ewif_vc

__all__ = [
    'PRESETS',
    'Regime',
    'Scenario',
    'build_hierarchy',
    'make_scenario',
    'CostLedger',
    'DecodeSession',
    'SimResult',
    'run_decode',
    'EnsembleResult',
    'compare_to_baseline',
    'run_ensemble',
    'summarize',
    'McEstimate',
    'mc_ewif_hc',
    'mc_ewif_sd',
    'mc_ewif_vc'
]
