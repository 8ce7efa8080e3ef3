"""
Candidate draft configurations.

A configuration is either one model drafting on its own or a vertical
cascade, written top model first: ('d1', 'pld') is VC(d1, pld) and
('d1', 'd2', 'pld') is VC(d1, VC(d2, pld)).
"""

from dataclasses import dataclass
from typing import List, Tuple

from drafting.model_spec import Hierarchy
from utils.exceptions import ConfigError


@dataclass(frozen=True)
class CandidateConfig:
    models: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, 'models', tuple(self.models))
        if not self.models:
            raise ConfigError("a configuration needs at least one model")

    @property
    def id(self) -> str:
        if len(self.models) == 1:
            return self.models[0]
        inner = self.models[-1]
        for model_id in reversed(self.models[:-1]):
            inner = f"VC({model_id},{inner})"
        return inner

    @property
    def top(self) -> str:
        return self.models[0]

    @property
    def estimator_key(self) -> str:
        return self.models[0]

    @property
    def is_cascade(self) -> bool:
        return len(self.models) > 1

    @property
    def levels(self) -> int:
        return len(self.models)

    @property
    def inner(self) -> 'CandidateConfig':
        return CandidateConfig(self.models[1:])

    def __str__(self) -> str:
        return self.id


def single(model_id: str) -> CandidateConfig:
    return CandidateConfig((model_id,))


def vertical(*model_ids: str) -> CandidateConfig:
    if len(model_ids) < 2:
        raise ConfigError("a vertical cascade needs at least two models")
    return CandidateConfig(tuple(model_ids))


def build_candidates(hierarchy: Hierarchy, candidate_set: str = 'cascades') -> List[CandidateConfig]:
    """
    Candidate list in a fixed order (earlier entries win objective ties).

    drafts:     every model above the bottom draft
    singles:    every model, bottom draft included
    cascades:   singles, then VC(d_i, bottom), then VC(d_i, VC(d_j, bottom)) for i < j
    """
    drafts = [m.id for m in hierarchy.drafts]
    bottom = hierarchy.bottom_model.id
    if candidate_set == 'drafts':
        return [single(m) for m in drafts]
    if candidate_set == 'singles':
        return [single(m) for m in drafts] + [single(bottom)]
    if candidate_set == 'cascades':
        configs = [single(m) for m in drafts] + [single(bottom)]
        configs += [vertical(m, bottom) for m in drafts]
        for i, upper in enumerate(drafts):
            for lower in drafts[i + 1:]:
                configs.append(vertical(upper, lower, bottom))
        return configs
    raise ConfigError(f"unknown candidate set {candidate_set!r}")
