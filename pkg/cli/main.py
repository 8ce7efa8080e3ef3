"""
Argument parsing and exit-code translation for the cascade toolkit CLI.

    cascade_spec.py [--log-level L] [--output-dir D] ewif {sd,vc,hc} ...
    cascade_spec.py bound {vc,hc} [--alphas ...] [--c2 0.01]
    cascade_spec.py simulate CONFIG [--seed S] [--workers W]
    cascade_spec.py compare CONFIG [--baseline NAME]
"""

import argparse
import logging
import sys
from typing import List, Optional

from calculations.constants import DEFAULT_K_MAX, DEFAULT_N_MAX
from utils.exceptions import ConfigError, DomainError, InvariantError
from utils.logging_config import setup_logging
from .commands import dispatch

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_INVARIANT = 4


def _add_ewif(subparsers) -> None:
    ewif = subparsers.add_parser('ewif', help='closed-form EWIF of SD, VC or HC')
    formulas = ewif.add_subparsers(dest='formula', required=True)

    sd = formulas.add_parser('sd', help='single-draft speculative decoding')
    sd.add_argument('--alpha', type=float, required=True, help='draft acceptance rate')
    sd.add_argument('--c', type=float, required=True, help='draft cost relative to the target')
    sd.add_argument('--k', type=int, default=1, help='draft length')

    vc = formulas.add_parser('vc', help='two-level vertical cascade')
    vc.add_argument('--a1', type=float, required=True, help='target acceptance of d1')
    vc.add_argument('--a2', type=float, required=True, help='d1 acceptance of d2')
    vc.add_argument('--c1', type=float, required=True)
    vc.add_argument('--c2', type=float, required=True)
    vc.add_argument('--n', type=int, default=1, help='d1 rounds per target verify')
    vc.add_argument('--k', type=int, default=1, help='d2 draft length per round')

    hc = formulas.add_parser('hc', help='two-level horizontal cascade')
    hc.add_argument('--a1', type=float, required=True)
    hc.add_argument('--a2', type=float, required=True)
    hc.add_argument('--c1', type=float, required=True)
    hc.add_argument('--c2', type=float, required=True)
    hc.add_argument('--k1', type=int, default=1)
    hc.add_argument('--k2', type=int, default=1)

    for sub in (sd, vc, hc):
        sub.add_argument('--optimize', action='store_true', help='search the hyperparameter grid')
        sub.add_argument('--k-max', type=int, default=DEFAULT_K_MAX)
        sub.add_argument('--n-max', type=int, default=DEFAULT_N_MAX)
        sub.add_argument('--csv', help='also write the row to this CSV file')


def _add_bound(subparsers) -> None:
    bound = subparsers.add_parser('bound', help='critical c_d1 below which a cascade beats SD')
    bound.add_argument('mode', choices=['vc', 'hc'])
    bound.add_argument('--alphas', help='comma-separated alpha_d1 grid (overrides min/max/points)')
    bound.add_argument('--alpha-min', type=float, default=0.1)
    bound.add_argument('--alpha-max', type=float, default=0.9)
    bound.add_argument('--points', type=int, default=17)
    bound.add_argument('--c2', type=float, default=0.01, help='bottom draft cost')
    bound.add_argument('--alpha-d2', type=float, default=0.3, help='d2 acceptance for hc mode')
    bound.add_argument('--k-max', type=int, default=DEFAULT_K_MAX)
    bound.add_argument('--n-max', type=int, default=DEFAULT_N_MAX)
    bound.add_argument('--output', help='CSV path (default <output-dir>/bound_<mode>.csv)')


def _add_runs(subparsers) -> None:
    simulate = subparsers.add_parser('simulate', help='run a config ensemble and write CSV tables')
    compare = subparsers.add_parser('compare', help='paired-seed speedups relative to a baseline')
    for sub in (simulate, compare):
        sub.add_argument('config', help='YAML or JSON run config')
        sub.add_argument('--seed', type=int, help='run a single seed instead of the config seeds')
        sub.add_argument('--workers', type=int, help='override the worker count')
    compare.add_argument('--baseline', help='scheduler name to normalize against')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='cascade_spec',
        description='Cascade speculative decoding analytics and simulation',
    )
    parser.add_argument('--log-level', help='DEBUG, INFO, WARNING, ERROR (default LOG_LEVEL)')
    parser.add_argument('--output-dir', help='directory for CSV and JSON-lines output')
    subparsers = parser.add_subparsers(dest='command', required=True)
    _add_ewif(subparsers)
    _add_bound(subparsers)
    _add_runs(subparsers)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    setup_logging(level=args.log_level)

    try:
        return dispatch(args.command, args)
    except (DomainError, ConfigError) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE
    except InvariantError as e:
        logger.critical(f"{args.command}: invariant violated: {e}")
        return EXIT_INVARIANT


if __name__ == '__main__':
    sys.exit(main())
