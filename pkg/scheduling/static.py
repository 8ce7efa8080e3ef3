"""
Fixed-pattern baseline schedulers.

Each emits the same draft shape every cycle regardless of estimates:

    autoregressive  no drafting, the target emits one token per cycle
    sd              one model drafts k tokens
    hc              k1 tokens from the upper model, then k2 from the lower one
    vc              n rounds of the top model verifying k inner tokens each
    hc_vc           a vertical-cascade head followed by a bottom-draft tail
    chain_tree      sd with sibling candidates expanded into a tree

Model ids left unset resolve against the session hierarchy on first use:
the first draft is the upper/top model, the second draft (or the bottom
draft when there is only one) the lower/inner one.
"""

from typing import TYPE_CHECKING, Optional, Tuple
import logging

from drafting.model_spec import Hierarchy
from utils.exceptions import ConfigError
from .base import Expansion, Scheduler, TreeBuild
from .candidates import single, vertical
from .executor import DraftOutcome
from .params import SchedulerParams

if TYPE_CHECKING:
    from simulation.session import DecodeSession

logger = logging.getLogger(__name__)


def _default_pair(hierarchy: Hierarchy) -> Tuple[str, str]:
    drafts = [m.id for m in hierarchy.drafts]
    if not drafts:
        raise ConfigError("hierarchy has no draft above the bottom model")
    lower = drafts[1] if len(drafts) > 1 else hierarchy.bottom_model.id
    return drafts[0], lower


def _append(build: TreeBuild, parent, outcome: DraftOutcome, k: int, depth: int) -> list:
    build.charges.extend(outcome.charges)
    build.observations.extend(outcome.observations)
    nodes = build.tree.add_chain(parent, outcome.tokens, outcome.confidences, outcome.config_id)
    build.expansions.append(Expansion(outcome.config_id, k, depth, len(outcome.tokens), nodes,
                                      estimator_key=outcome.estimator_key))
    return nodes


def _check_k(name: str, value: int, minimum: int = 0) -> int:
    if isinstance(value, bool) or int(value) != value or value < minimum:
        raise ConfigError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


class AutoregressiveScheduler(Scheduler):
    """Target-only decoding: a root-only tree, one token per verify cycle."""
    name = 'autoregressive'

    def build_tree(self, session: 'DecodeSession') -> TreeBuild:
        return TreeBuild(tree=self.new_tree(session), stop_reason='no_drafting')


class SDScheduler(Scheduler):
    name = 'sd'

    def __init__(self, k: int, model: Optional[str] = None, params: Optional[SchedulerParams] = None):
        super().__init__(params)
        self.k = _check_k('k', k, minimum=1)
        self.model = model

    def describe(self) -> str:
        return f"SD({self.model or 'd1'},{self.k})"

    def _draft(self, session: 'DecodeSession', num_candidates: int) -> Tuple[TreeBuild, DraftOutcome]:
        model = self.model or _default_pair(session.hierarchy)[0]
        build = TreeBuild(tree=self.new_tree(session), stop_reason='static')
        outcome = session.executor.draft(single(model), session.position, self.k,
                                         num_candidates=num_candidates)
        return build, outcome

    def build_tree(self, session: 'DecodeSession') -> TreeBuild:
        build, outcome = self._draft(session, 1)
        _append(build, build.tree.root, outcome, self.k, 0)
        return build


class ChainTreeScheduler(SDScheduler):
    """SD whose drafted rows also contribute sibling candidates."""
    name = 'chain_tree'

    def describe(self) -> str:
        return f"Tree({self.model or 'd1'},{self.k})"

    def build_tree(self, session: 'DecodeSession') -> TreeBuild:
        build, outcome = self._draft(session, self.params.top_k)
        if outcome.candidates is None:
            _append(build, build.tree.root, outcome, self.k, 0)
            return build
        build.charges.extend(outcome.charges)
        build.observations.extend(outcome.observations)
        nodes = build.tree.sibling_expand(build.tree.root, outcome.candidates, outcome.candidate_probs,
                                          outcome.config_id, top_p=self.params.top_p,
                                          top_k=self.params.top_k)
        build.expansions.append(Expansion(outcome.config_id, self.k, 0, len(outcome.tokens), nodes,
                                          estimator_key=outcome.estimator_key))
        return build


class HCScheduler(Scheduler):
    """Horizontal cascade: k1 tokens from the upper model, then k2 from the lower one."""
    name = 'hc'

    def __init__(self, k1: int, k2: int, upper: Optional[str] = None, lower: Optional[str] = None,
                 params: Optional[SchedulerParams] = None):
        super().__init__(params)
        self.k1 = _check_k('k1', k1)
        self.k2 = _check_k('k2', k2)
        if self.k1 + self.k2 < 1:
            raise ConfigError("hc needs k1 + k2 >= 1")
        self.upper = upper
        self.lower = lower

    def describe(self) -> str:
        return f"HC({self.k1},{self.k2})"

    def build_tree(self, session: 'DecodeSession') -> TreeBuild:
        default_upper, default_lower = _default_pair(session.hierarchy)
        upper, lower = self.upper or default_upper, self.lower or default_lower
        build = TreeBuild(tree=self.new_tree(session), stop_reason='static')

        parent, head = build.tree.root, []
        if self.k1 > 0:
            first = session.executor.draft(single(upper), session.position, self.k1)
            nodes = _append(build, parent, first, self.k1, 0)
            head = first.tokens
            if nodes:
                parent = nodes[-1]
        if self.k2 > 0 and not build.tree.is_full:
            second = session.executor.draft(single(lower), session.position + len(head), self.k2,
                                            suffix=head)
            _append(build, parent, second, self.k2, len(head))
        return build


class VCScheduler(Scheduler):
    """Vertical cascade: n rounds, each verifying k inner tokens with the top model."""
    name = 'vc'

    def __init__(self, n: int, k: int, top: Optional[str] = None, inner: Optional[str] = None,
                 params: Optional[SchedulerParams] = None):
        super().__init__(params)
        self.n = _check_k('n', n, minimum=1)
        self.k = _check_k('k', k)
        self.top = top
        self.inner = inner

    def describe(self) -> str:
        return f"VC({self.n},{self.k})"

    def _head(self, session: 'DecodeSession', build: TreeBuild) -> list:
        default_top, default_inner = _default_pair(session.hierarchy)
        config = vertical(self.top or default_top, self.inner or default_inner)
        outcome = session.executor.draft(config, session.position, 0, rounds=self.n, inner_k=self.k)
        return _append(build, build.tree.root, outcome, self.k, 0)

    def build_tree(self, session: 'DecodeSession') -> TreeBuild:
        build = TreeBuild(tree=self.new_tree(session), stop_reason='static')
        self._head(session, build)
        return build


class HCVCScheduler(VCScheduler):
    """Vertical-cascade head followed by k_tail bottom-draft tokens."""
    name = 'hc_vc'

    def __init__(self, n: int, k: int, k_tail: int, top: Optional[str] = None,
                 inner: Optional[str] = None, tail: Optional[str] = None,
                 params: Optional[SchedulerParams] = None):
        super().__init__(n, k, top, inner, params)
        self.k_tail = _check_k('k_tail', k_tail, minimum=1)
        self.tail = tail

    def describe(self) -> str:
        return f"HC+VC({self.n},{self.k},{self.k_tail})"

    def build_tree(self, session: 'DecodeSession') -> TreeBuild:
        build = TreeBuild(tree=self.new_tree(session), stop_reason='static')
        nodes = self._head(session, build)
        if not nodes or build.tree.is_full:
            return build
        head = nodes[-1].path_tokens()
        tail = self.tail or session.hierarchy.bottom_model.id
        outcome = session.executor.draft(single(tail), session.position + len(head), self.k_tail,
                                         suffix=head)
        _append(build, nodes[-1], outcome, self.k_tail, len(head))
        return build


STATIC_KINDS = {
    'autoregressive': AutoregressiveScheduler,
    'sd': SDScheduler,
    'chain_tree': ChainTreeScheduler,
    'hc': HCScheduler,
    'vc': VCScheduler,
    'hc_vc': HCVCScheduler,
}


def static_schedule(kind: str, params: Optional[SchedulerParams] = None, **hyper) -> Scheduler:
    """Build a fixed-pattern scheduler from its kind and hyperparameters."""
    try:
        cls = STATIC_KINDS[kind.lower()]
    except KeyError:
        raise ConfigError(f"unknown static scheduler {kind!r}; known: {sorted(STATIC_KINDS)}") from None
    try:
        return cls(params=params, **hyper)
    except TypeError as e:
        raise ConfigError(f"invalid hyperparameters for {kind}: {e}") from None
