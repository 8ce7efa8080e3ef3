"""
Run configuration files.

A run config is a YAML (or JSON) document:

    version: 1
    scenario: counterexample            # preset name
    # scenario: {preset: shift, horizon: 4096}
    # scenario: {name: mine, models: [...], horizon: 2048, repeat_bias: 0.3}
    schedulers:
      - greedy
      - {kind: hc, k1: 2, k2: 2}
      - dytc
    params: {t_min: 11.5}               # SchedulerParams overrides
    seeds: {start: 0, count: 20}        # or an explicit list
    workers: 4
    output: {dir: results, prefix: counterexample, step_log: false}
    baseline: greedy

Validation is strict: unknown keys are rejected and every problem found is
reported at once.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional
import logging

import yaml

from scheduling.base import Scheduler
from scheduling.factory import make_scheduler
from scheduling.params import SchedulerParams
from simulation.scenario import DEFAULT_HORIZON, Scenario, build_hierarchy, make_scenario
from utils.exceptions import CascadeError, ConfigError

logger = logging.getLogger(__name__)

CONFIG_VERSION = 1
TOP_LEVEL_KEYS = {'version', 'scenario', 'schedulers', 'params', 'seeds', 'workers', 'output', 'baseline'}
PRESET_KEYS = {'preset', 'horizon', 'seed'}
INLINE_KEYS = {'name', 'models', 'horizon', 'repeat_bias', 'regime', 'shift_step',
               'prompt_length', 'vocab_size', 'params', 'seed'}
OUTPUT_KEYS = {'dir', 'prefix', 'step_log'}


@dataclass
class RunConfig:
    scenario: Scenario
    schedulers: List[Scheduler]
    params: SchedulerParams
    seeds: List[int]
    workers: Optional[int] = None
    output_dir: Optional[str] = None
    prefix: str = 'run'
    step_log: bool = False
    baseline: Optional[str] = None
    raw: Dict[str, Any] = field(default_factory=dict, repr=False)

    @property
    def scheduler_names(self) -> List[str]:
        return [s.name for s in self.schedulers]


def _unknown(mapping: Mapping, allowed: set, where: str) -> List[str]:
    return [f"{where}: unknown key {key!r}" for key in sorted(set(mapping) - allowed, key=str)]


def _scenario(value: Any, problems: List[str]) -> Optional[Scenario]:
    if isinstance(value, str):
        value = {'preset': value}
    if not isinstance(value, Mapping):
        problems.append("scenario must be a preset name or a mapping")
        return None

    try:
        if 'preset' in value:
            unknown = _unknown(value, PRESET_KEYS, 'scenario')
            if unknown:
                problems.extend(unknown)
                return None
            return make_scenario(str(value['preset']), int(value.get('seed', 0)),
                                 horizon=value.get('horizon'))

        unknown = _unknown(value, INLINE_KEYS, 'scenario')
        if unknown:
            problems.extend(unknown)
            return None
        if 'models' not in value:
            problems.append("scenario: needs 'preset' or 'models'")
            return None
        kwargs = {key: value[key] for key in ('repeat_bias', 'regime', 'shift_step',
                                              'prompt_length', 'vocab_size', 'seed') if key in value}
        return Scenario(
            name=str(value.get('name', 'custom')),
            hierarchy=build_hierarchy(value['models']),
            horizon=int(value.get('horizon', DEFAULT_HORIZON)),
            param_overrides=dict(value.get('params') or {}),
            **kwargs,
        )
    except ConfigError as e:
        problems.append(str(e))
    except (CascadeError, ValueError, TypeError) as e:
        problems.append(f"scenario: {e}")
    return None


def _seeds(value: Any, problems: List[str]) -> List[int]:
    if value is None:
        return [0]
    if isinstance(value, Mapping):
        unknown = _unknown(value, {'start', 'count'}, 'seeds')
        if unknown:
            problems.extend(unknown)
            return []
        start, count = value.get('start', 0), value.get('count', 1)
        if not isinstance(start, int) or not isinstance(count, int) or start < 0 or count < 1:
            problems.append(f"seeds: start must be >= 0 and count >= 1, got {start}, {count}")
            return []
        return list(range(start, start + count))
    if isinstance(value, list) and value and all(isinstance(s, int) and s >= 0 for s in value):
        if len(set(value)) != len(value):
            problems.append("seeds: duplicate seeds")
        return list(value)
    problems.append("seeds must be a non-empty list of non-negative integers or {start, count}")
    return []


def parse_run_config(data: Any) -> RunConfig:
    """
    Validate a loaded config document.

    Raises:
        ConfigError: listing every problem found
    """
    if not isinstance(data, Mapping):
        raise ConfigError("run config must be a mapping")
    problems = _unknown(data, TOP_LEVEL_KEYS, 'run config')

    if data.get('version') != CONFIG_VERSION:
        problems.append(f"version must be {CONFIG_VERSION}, got {data.get('version')!r}")
    if 'scenario' not in data:
        problems.append("missing 'scenario'")
    scenario = _scenario(data.get('scenario'), problems) if 'scenario' in data else None

    params = None
    if scenario is not None:
        try:
            params = scenario.default_params().with_overrides(dict(data.get('params') or {}))
        except ConfigError as e:
            problems.append(str(e))

    specs = data.get('schedulers')
    schedulers: List[Scheduler] = []
    if not isinstance(specs, list) or not specs:
        problems.append("schedulers must be a non-empty list")
    elif params is not None:
        for i, spec in enumerate(specs):
            try:
                schedulers.append(make_scheduler(spec, params))
            except ConfigError as e:
                problems.append(f"schedulers[{i}]: {e}")
        names = [s.name for s in schedulers]
        problems.extend(f"duplicate scheduler name {n!r}" for n in sorted({n for n in names if names.count(n) > 1}))

    seeds = _seeds(data.get('seeds'), problems)

    workers = data.get('workers')
    if workers is not None and (not isinstance(workers, int) or workers < 1):
        problems.append(f"workers must be a positive integer, got {workers!r}")

    output = data.get('output') or {}
    if not isinstance(output, Mapping):
        problems.append("output must be a mapping")
        output = {}
    problems.extend(_unknown(output, OUTPUT_KEYS, 'output'))

    baseline = data.get('baseline')
    if baseline is not None and schedulers and baseline not in [s.name for s in schedulers]:
        problems.append(f"baseline {baseline!r} is not among the schedulers {[s.name for s in schedulers]}")

    if problems:
        raise ConfigError("invalid run config", problems)

    return RunConfig(
        scenario=scenario,
        schedulers=schedulers,
        params=params,
        seeds=seeds,
        workers=workers,
        output_dir=output.get('dir'),
        prefix=str(output.get('prefix', scenario.name)),
        step_log=bool(output.get('step_log', False)),
        baseline=baseline,
        raw=dict(data),
    )


def load_run_config(path: str) -> RunConfig:
    """Read and validate a YAML or JSON run config file."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"cannot read run config {path!r}: {e}") from None
    except yaml.YAMLError as e:
        raise ConfigError(f"run config {path!r} is not valid YAML: {e}") from None
    config = parse_run_config(data)
    logger.info(f"Loaded run config {path}: scenario {config.scenario.name}, "
                f"schedulers {config.scheduler_names}, {len(config.seeds)} seeds")
    return config
