"""
Sub-command implementations.

Each command takes the parsed argparse namespace and returns a process exit
code; exceptions are translated into exit codes by cli.main.
"""

import argparse
import logging
import os
from typing import List, Optional

import numpy as np
import pandas as pd
from tabulate import tabulate

from calculations import (
    HcParams,
    SpecParams,
    VcParams,
    borderline_curve,
    ewif_hc,
    ewif_sd,
    ewif_vc,
    optimal_hc,
    optimal_sd,
    optimal_vc,
)
from config import get_config
from simulation.ensemble import compare_to_baseline, run_ensemble
from utils.exceptions import ConfigError, DomainError
from utils.output_writer import write_csv, write_jsonl
from .run_config import RunConfig, load_run_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
BOUND_COLUMNS = ['alpha_d1', 'c_d1_critical']


def _print_table(frame: pd.DataFrame, floatfmt: str = '.4f') -> None:
    print(tabulate(frame, headers='keys', tablefmt='github', showindex=False, floatfmt=floatfmt))


def _output_dir(override: Optional[str]) -> str:
    return get_config().get_output_dir(override)


def _parse_grid(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise DomainError(f"alpha grid must be comma-separated numbers, got {text!r}") from None


def cmd_ewif(args: argparse.Namespace) -> int:
    """Closed-form EWIF of one configuration, or the optimum over its hyperparameters."""
    formula = args.formula
    if formula == 'sd':
        if args.optimize:
            best = optimal_sd(args.alpha, args.c, args.k_max)
            row = {'formula': 'sd', 'k': best.k, 'ewif': best.ewif}
        else:
            row = {'formula': 'sd', 'k': args.k, 'ewif': ewif_sd(SpecParams(args.alpha, args.c, args.k))}
    elif formula == 'vc':
        if args.optimize:
            best = optimal_vc(args.a1, args.a2, args.c1, args.c2, args.n_max, args.k_max)
            row = {'formula': 'vc', 'n': best.n, 'k': best.k, 'ewif': best.ewif}
        else:
            value = ewif_vc(VcParams(args.a1, args.a2, args.c1, args.c2, args.n, args.k))
            row = {'formula': 'vc', 'n': args.n, 'k': args.k, 'ewif': value}
    else:
        if args.optimize:
            best = optimal_hc(args.a1, args.a2, args.c1, args.c2, args.k_max)
            row = {'formula': 'hc', 'k1': best.k_d1, 'k2': best.k_d2, 'ewif': best.ewif}
        else:
            value = ewif_hc(HcParams(args.a1, args.a2, args.c1, args.c2, args.k1, args.k2))
            row = {'formula': 'hc', 'k1': args.k1, 'k2': args.k2, 'ewif': value}

    frame = pd.DataFrame([row])
    _print_table(frame)
    if args.csv:
        write_csv(frame, args.csv)
    return EXIT_OK


def cmd_bound(args: argparse.Namespace) -> int:
    """Critical c_d1 curve over an acceptance grid, written as CSV."""
    if args.alphas:
        grid = _parse_grid(args.alphas)
    else:
        if args.points < 1:
            raise DomainError(f"points must be >= 1, got {args.points}")
        grid = np.linspace(args.alpha_min, args.alpha_max, args.points).tolist()
    if not grid:
        raise DomainError("alpha grid is empty")

    points = borderline_curve(grid, args.c2, args.k_max, args.n_max, mode=args.mode.upper(),
                              alpha_d2=args.alpha_d2)
    frame = pd.DataFrame([(p.alpha_d1, p.c_d1_critical) for p in points], columns=BOUND_COLUMNS)

    path = args.output or os.path.join(_output_dir(args.output_dir), f"bound_{args.mode.lower()}.csv")
    write_csv(frame, path)
    _print_table(frame, floatfmt='.6f')
    return EXIT_OK


def _load(args: argparse.Namespace) -> RunConfig:
    config = load_run_config(args.config)
    if getattr(args, 'seed', None) is not None:
        config.seeds = [args.seed]
    if getattr(args, 'workers', None) is not None:
        config.workers = args.workers
    return config


def _step_records(results) -> List[dict]:
    records = []
    for result in results:
        for step in result.step_log:
            records.append({'scheduler': result.scheduler, 'seed': result.seed, **step})
    return records


def cmd_simulate(args: argparse.Namespace) -> int:
    """Run every scheduler of a run config on every seed and write the tables."""
    config = _load(args)
    ensemble = run_ensemble(config.scenario, config.schedulers, config.seeds,
                            workers=config.workers, keep_step_log=config.step_log)

    out_dir = _output_dir(args.output_dir or config.output_dir)
    write_csv(ensemble.runs, os.path.join(out_dir, f"{config.prefix}_runs.csv"))
    write_csv(ensemble.summary, os.path.join(out_dir, f"{config.prefix}_summary.csv"))
    if config.step_log:
        write_jsonl(_step_records(ensemble.results), os.path.join(out_dir, f"{config.prefix}_steps.jsonl"))

    _print_table(ensemble.summary)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    """Paired-seed speedups of every scheduler relative to a baseline."""
    config = _load(args)
    baseline = args.baseline or config.baseline
    if not baseline:
        raise ConfigError("compare needs a baseline (--baseline or 'baseline' in the run config)")
    if baseline not in config.scheduler_names:
        raise ConfigError(f"baseline {baseline!r} is not among the schedulers {config.scheduler_names}")

    ensemble = run_ensemble(config.scenario, config.schedulers, config.seeds,
                            workers=config.workers, keep_step_log=False)
    table = compare_to_baseline(ensemble.runs, baseline)

    out_dir = _output_dir(args.output_dir or config.output_dir)
    write_csv(table, os.path.join(out_dir, f"{config.prefix}_compare.csv"))
    _print_table(table)
    return EXIT_OK


COMMANDS = {
    'ewif': cmd_ewif,
    'bound': cmd_bound,
    'simulate': cmd_simulate,
    'compare': cmd_compare,
}


def dispatch(name: str, args: argparse.Namespace) -> int:
    return COMMANDS[name](args)
