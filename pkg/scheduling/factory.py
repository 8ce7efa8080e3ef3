"""
Scheduler factory used by the CLI and the ensemble runner.

A scheduler spec is either a bare kind name ('dytc', 'greedy',
'autoregressive') or a mapping:

    {'kind': 'hc', 'k1': 2, 'k2': 2, 'name': 'HC(2,2)', 'params': {'t_min': 2.0}}

'name' relabels the scheduler in result tables; 'params' overrides the
shared SchedulerParams for this scheduler only.
"""

from typing import Any, Dict, Mapping, Optional, Union
import logging

from utils.exceptions import ConfigError
from .base import Scheduler
from .dynamic import DyTCScheduler, GreedyScheduler
from .params import SchedulerParams
from .static import STATIC_KINDS, static_schedule

logger = logging.getLogger(__name__)

DYNAMIC_KINDS = {
    'dytc': DyTCScheduler,
    'greedy': GreedyScheduler,
}

SCHEDULER_KINDS = sorted(set(DYNAMIC_KINDS) | set(STATIC_KINDS))

SchedulerSpec = Union[str, Mapping[str, Any]]


def make_scheduler(spec: SchedulerSpec, params: Optional[SchedulerParams] = None) -> Scheduler:
    """
    Build a scheduler from a spec.

    Raises:
        ConfigError: unknown kind, bad hyperparameters or parameter overrides
    """
    base = params or SchedulerParams()
    if isinstance(spec, str):
        spec = {'kind': spec}
    if not isinstance(spec, Mapping):
        raise ConfigError(f"scheduler spec must be a name or a mapping, got {type(spec).__name__}")
    if 'kind' not in spec:
        raise ConfigError("scheduler spec needs a 'kind'")

    hyper: Dict[str, Any] = dict(spec)
    kind = str(hyper.pop('kind')).lower()
    label = hyper.pop('name', None)
    scheduler_params = base.with_overrides(hyper.pop('params', None))

    if kind in DYNAMIC_KINDS:
        if hyper:
            raise ConfigError(f"{kind} takes no hyperparameters", [f"unexpected key {k!r}" for k in hyper])
        scheduler = DYNAMIC_KINDS[kind](scheduler_params)
    elif kind in STATIC_KINDS:
        scheduler = static_schedule(kind, params=scheduler_params, **hyper)
    else:
        raise ConfigError(f"unknown scheduler kind {kind!r}; known: {SCHEDULER_KINDS}")

    if label:
        scheduler.name = str(label)
    elif kind in STATIC_KINDS:
        scheduler.name = scheduler.describe()
    logger.debug(f"Built scheduler {scheduler!r}")
    return scheduler
