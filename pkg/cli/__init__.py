"""
Command-line front end.

This module contains:
- Run-config loading and validation
- The ewif, bound, simulate and compare sub-commands
- Argument parsing and exit-code mapping
"""

from .run_config import RunConfig, load_run_config, parse_run_config
from .commands import cmd_bound, cmd_compare, cmd_ewif, cmd_simulate
from .main import build_parser, main

__all__ = [
    'RunConfig',
    'load_run_config',
    'parse_run_config',
    'cmd_ewif',
    'cmd_bound',
    'cmd_simulate',
    'cmd_compare',
    'build_parser',
    'main',
]
