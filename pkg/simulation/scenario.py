"""
Evaluation scenarios: a draft hierarchy, a truth-stream recipe and a horizon.

Acceptance profiles are indexed by stream position, and the prompt occupies
the first prompt_length positions, so a shift at decode step s takes effect
at stream position prompt_length + s.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Sequence
import logging

from drafting.model_spec import (
    AlphaProfile,
    Hierarchy,
    ModelKind,
    ModelSpec,
    counterexample_hierarchy,
    pld_model,
    two_tier_hierarchy,
    validate_hierarchy,
)
from drafting.token_stream import DEFAULT_VOCAB_SIZE, TokenStream, make_corpus
from scheduling.params import SchedulerParams
from utils.exceptions import ConfigError, DomainError

logger = logging.getLogger(__name__)

DEFAULT_HORIZON = 1024
DEFAULT_PROMPT_LENGTH = 64
TRUTH_MARGIN = 512
MIXTURE_SEGMENTS = 8


class Regime(str, Enum):
    STATIONARY = 'stationary'
    SHIFT = 'shift'
    MIXTURE = 'mixture'


@dataclass(frozen=True)
class Scenario:
    """Everything a decode session needs besides the scheduler and the seed.

    param_overrides adjust the default SchedulerParams for this scenario
    (for example perfect estimates on the counterexample preset).
    """
    name: str
    hierarchy: Hierarchy
    horizon: int = DEFAULT_HORIZON
    repeat_bias: float = 0.5
    regime: Regime = Regime.STATIONARY
    shift_step: Optional[int] = None
    prompt_length: int = DEFAULT_PROMPT_LENGTH
    vocab_size: int = DEFAULT_VOCAB_SIZE
    seed: int = 0
    param_overrides: Mapping[str, Any] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if not isinstance(self.regime, Regime):
            object.__setattr__(self, 'regime', Regime(self.regime))
        problems = []
        if self.horizon < 1:
            problems.append(f"horizon must be >= 1, got {self.horizon}")
        if self.prompt_length < 0:
            problems.append(f"prompt_length must be >= 0, got {self.prompt_length}")
        if not 0.0 <= self.repeat_bias <= 1.0:
            problems.append(f"repeat_bias must be in [0, 1], got {self.repeat_bias}")
        if self.regime is Regime.SHIFT:
            if self.shift_step is None or not 0 < self.shift_step < self.horizon:
                problems.append(f"shift_step must be in (0, horizon), got {self.shift_step}")
        problems.extend(validate_hierarchy(self.hierarchy))
        if problems:
            raise ConfigError(f"invalid scenario {self.name!r}", problems)

    @property
    def truth_length(self) -> int:
        return self.prompt_length + self.horizon + TRUTH_MARGIN

    def make_truth(self, truth_seed: int) -> TokenStream:
        return make_corpus(truth_seed, self.truth_length, self.repeat_bias, self.vocab_size)

    def default_params(self, base: Optional[SchedulerParams] = None) -> SchedulerParams:
        return (base or SchedulerParams()).with_overrides(dict(self.param_overrides))

    def describe(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'models': self.hierarchy.ids,
            'horizon': self.horizon,
            'repeat_bias': self.repeat_bias,
            'regime': self.regime.value,
            'shift_step': self.shift_step,
        }


def _neural(model_id: str, alpha, cost: float, noise: float = 0.0) -> ModelSpec:
    profile = alpha if isinstance(alpha, AlphaProfile) else AlphaProfile.constant(alpha)
    return ModelSpec(model_id, ModelKind.NEURAL_SIM, profile, cost, confidence_noise=noise)


def _counterexample(seed: int, horizon: int) -> Scenario:
    return Scenario(
        name='counterexample',
        hierarchy=counterexample_hierarchy(),
        horizon=horizon,
        seed=seed,
        param_overrides={
            'estimates': 'perfect',
            't_min': 11.5,
            'sibling_expansion': False,
            'candidate_set': 'drafts',
            'calibration_steps': 0,
        },
    )


def _two_tier(seed: int, horizon: int, repeat_bias: float = 0.5, name: str = 'two_tier') -> Scenario:
    return Scenario(
        name=name,
        hierarchy=two_tier_hierarchy(),
        horizon=horizon,
        repeat_bias=repeat_bias,
        seed=seed,
        param_overrides={'candidate_set': 'cascades', 't_min': 9.0, 'calibration_steps': 2},
    )


def _shift(seed: int, horizon: int) -> Scenario:
    shift_step = max(1, horizon // 2)
    start = DEFAULT_PROMPT_LENGTH + shift_step
    hierarchy = Hierarchy((
        _neural('d1', 0.85, 0.4),
        _neural('d2', AlphaProfile.from_segments([(0, 0.8), (start, 0.5)]), 0.3),
        pld_model(alpha=0.3),
    ))
    return Scenario(
        name='shift',
        hierarchy=hierarchy,
        horizon=horizon,
        regime=Regime.SHIFT,
        shift_step=shift_step,
        seed=seed,
        param_overrides={'candidate_set': 'singles', 't_min': 9.0, 'calibration_steps': 2},
    )


def _mixture(seed: int, horizon: int) -> Scenario:
    segment = max(1, horizon // MIXTURE_SEGMENTS)
    starts = [0] + [DEFAULT_PROMPT_LENGTH + i * segment for i in range(1, MIXTURE_SEGMENTS)]
    high = [i % 2 == 0 for i in range(MIXTURE_SEGMENTS)]
    d1 = AlphaProfile.from_segments([(s, 0.9 if h else 0.6) for s, h in zip(starts, high)])
    d2 = AlphaProfile.from_segments([(s, 0.8 if h else 0.4) for s, h in zip(starts, high)])
    hierarchy = Hierarchy((_neural('d1', d1, 0.45), _neural('d2', d2, 0.3), pld_model(alpha=0.3)))
    return Scenario(
        name='mixture',
        hierarchy=hierarchy,
        horizon=horizon,
        regime=Regime.MIXTURE,
        seed=seed,
        param_overrides={'candidate_set': 'cascades', 't_min': 9.0, 'calibration_steps': 2},
    )


PRESETS = {
    'counterexample': _counterexample,
    'two_tier': _two_tier,
    'shift': _shift,
    'mixture': _mixture,
    'pld_poor': lambda seed, horizon: _two_tier(seed, horizon, repeat_bias=0.0, name='pld_poor'),
}

# alternate names accepted by make_scenario and run configs
PRESET_ALIASES = {'appendix_e': 'two_tier'}


def make_scenario(preset: str, seed: int = 0, horizon: Optional[int] = None) -> Scenario:
    """
    Build a named scenario preset.

    Raises:
        ConfigError: unknown preset name
    """
    try:
        factory = PRESETS[PRESET_ALIASES.get(preset, preset)]
    except KeyError:
        known = sorted(PRESETS) + sorted(PRESET_ALIASES)
        raise ConfigError(f"unknown scenario preset {preset!r}; known: {known}") from None
    scenario = factory(seed, horizon or DEFAULT_HORIZON)
    logger.debug(f"Scenario {scenario.describe()}")
    return scenario


def _profile(value) -> AlphaProfile:
    if isinstance(value, (int, float)):
        return AlphaProfile.constant(float(value))
    return AlphaProfile.from_segments([(int(start), float(alpha)) for start, alpha in value])


def build_hierarchy(models: Sequence[Mapping[str, Any]]) -> Hierarchy:
    """Hierarchy from plain mappings, top model first and the bottom draft last.

    Each mapping needs id, kind (neural_sim or ngram_pld), alpha (a number
    or a list of [start_position, alpha] pairs) and cost.
    """
    specs: List[ModelSpec] = []
    problems = []
    for i, entry in enumerate(models):
        missing = [key for key in ('id', 'kind', 'alpha', 'cost') if key not in entry]
        if missing:
            problems.append(f"model {i}: missing {missing}")
            continue
        try:
            specs.append(ModelSpec(
                id=str(entry['id']),
                kind=ModelKind(entry['kind']),
                alpha_profile=_profile(entry['alpha']),
                cost=float(entry['cost']),
                confidence_noise=float(entry.get('confidence_noise', 0.0)),
                max_ngram=int(entry.get('max_ngram', 3)),
                relative_alpha=dict(entry.get('relative_alpha', {})),
            ))
        except (DomainError, ValueError, TypeError) as e:
            problems.append(f"model {i}: {e}")
    if problems:
        raise ConfigError("invalid model list", problems)
    if not specs:
        raise ConfigError("model list is empty")
    return Hierarchy(tuple(specs))
