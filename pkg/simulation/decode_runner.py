"""
Full decode sessions under a scheduler.

One cycle: the scheduler builds a draft tree (charging its draft calls),
the target verifies the whole tree for one cost unit, estimators learn from
the first-token outcome, and the accepted tokens plus the bonus token are
committed. The run ends once the horizon is reached.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
import logging

from config import Config
from drafting.draft_tree import TreeVerification, verify_tree
from drafting.token_stream import is_prefix_of
from estimation.calibration import TARGET_ID
from scheduling.base import Scheduler, TreeBuild
from utils.exceptions import InvariantError
from .scenario import Scenario
from .session import DecodeSession

logger = logging.getLogger(__name__)

VERIFY_COST = 1.0
AUDIT_TOLERANCE = 1e-9


@dataclass
class SimResult:
    """Outcome of one decode session; empirical_ewif is tokens per cost unit."""
    scheduler: str
    scenario: str
    seed: int
    tokens_generated: int
    cost_units: float
    empirical_ewif: float
    cycles: int
    config_counts: Dict[str, int] = field(default_factory=dict)
    step_log: List[Dict[str, Any]] = field(default_factory=list, repr=False)
    decoded: List[int] = field(default_factory=list, repr=False)
    cost_by_model: Dict[str, float] = field(default_factory=dict)

    @property
    def tokens_per_cycle(self) -> float:
        return self.tokens_generated / self.cycles if self.cycles else 0.0

    def to_row(self) -> Dict[str, Any]:
        return {
            'scheduler': self.scheduler,
            'scenario': self.scenario,
            'seed': self.seed,
            'tokens_generated': self.tokens_generated,
            'cost_units': self.cost_units,
            'empirical_ewif': self.empirical_ewif,
            'cycles': self.cycles,
            'tokens_per_cycle': self.tokens_per_cycle,
        }


def _update_estimators(session: DecodeSession, build: TreeBuild, verification: TreeVerification,
                       update_all: bool) -> None:
    catalog = session.catalog
    for config_id, key, _ in build.empty_drafts:
        session.ensure_registered(config_id, key)
    for expansion in build.expansions:
        session.ensure_registered(expansion.config_id, expansion.estimator_key)
        catalog.record_selection(expansion.config_id)
        accepted = sum(1 for node in verification.path if node.config_id == expansion.config_id)
        catalog.record_tokens(expansion.config_id, expansion.drafted, accepted)

    # empty drafts carry no acceptance evidence; only the top-ranked root token counts
    root_children = build.tree.root.children
    if root_children:
        first = root_children[0]
        hit = bool(verification.path) and verification.path[0] is first
        catalog.record_first_token_outcome(first.config_id, hit)

    if not update_all:
        return
    reached = {id(build.tree.root)} | {id(node) for node in verification.path}
    for expansion in build.expansions:
        first = expansion.first_node
        if first is None or first.parent is build.tree.root or id(first.parent) not in reached:
            continue
        depth = first.depth - 1
        hit = len(verification.path) > depth and verification.path[depth] is first
        catalog.record_first_token_outcome(expansion.config_id, hit)


def _step_record(session: DecodeSession, build: TreeBuild, verification: TreeVerification,
                 committed: List[int], position: int, cycle_cost: float) -> Dict[str, Any]:
    root = build.expansion_at_root()
    record: Dict[str, Any] = {
        'step': session.cycle,
        'position': position,
        'config': root.config_id if root else None,
        'k': root.k if root else 0,
        'tree_size': build.tree.size,
        'stop_reason': build.stop_reason,
        'accepted': verification.accepted,
        'emitted': len(committed),
        'cost': round(cycle_cost, 6),
        'expansions': [e.as_record() for e in build.expansions],
    }
    if root is not None and root.objective is not None:
        record['objective'] = round(root.objective, 6)
        record['runner_up'] = root.runner_up
        record['runner_up_objective'] = (None if root.runner_up_objective is None
                                         else round(root.runner_up_objective, 6))
    if session.params.estimates == 'online':
        record['estimates'] = session.catalog.snapshot()
    record['tree'] = build.tree.dump()
    return record


def run_decode(scenario: Scenario, scheduler: Scheduler, seed: Optional[int] = None,
               keep_step_log: Optional[bool] = None) -> SimResult:
    """
    Decode scenario.horizon tokens with the scheduler.

    Raises:
        InvariantError: decoded tokens diverge from the truth stream or the
            cost ledger does not re-sum to the charged total
    """
    seed = scenario.seed if seed is None else seed
    keep_step_log = Config.KEEP_STEP_LOG if keep_step_log is None else keep_step_log
    params = scheduler.params
    session = DecodeSession(scenario, params, seed)
    counts: Counter = Counter()
    step_log: List[Dict[str, Any]] = []

    if scheduler.uses_estimates and params.calibration_steps > 0:
        session.run_calibration()

    while not session.done:
        position = session.position
        build = scheduler.build_tree(session)
        for charge in build.charges:
            session.ledger.charge(session.cycle, charge.model_id, charge.kind, charge.units)

        verification = verify_tree(build.tree, session.truth, position)
        session.ledger.charge(session.cycle, TARGET_ID, 'verify', VERIFY_COST)

        _update_estimators(session, build, verification, params.update_all_expansions)
        committed = session.commit(verification.tokens)
        counts.update(e.config_id for e in build.expansions)

        if keep_step_log:
            step_log.append(_step_record(session, build, verification, committed, position,
                                         build.cost_units + VERIFY_COST))
        session.cycle += 1
        session.observe(build.observations)

    if not is_prefix_of(session.decoded, session.truth, scenario.prompt_length):
        raise InvariantError(f"{scheduler.name} on {scenario.name} seed {seed}: "
                             f"decoded tokens diverge from the truth stream")
    audited = session.ledger.audit()
    if abs(audited - session.ledger.total) > AUDIT_TOLERANCE * max(1.0, audited):
        raise InvariantError(f"cost ledger mismatch: charged {session.ledger.total}, "
                             f"entries sum to {audited}")

    tokens = len(session.decoded)
    result = SimResult(
        scheduler=scheduler.name,
        scenario=scenario.name,
        seed=seed,
        tokens_generated=tokens,
        cost_units=audited,
        empirical_ewif=tokens / audited,
        cycles=session.cycle,
        config_counts=dict(counts),
        step_log=step_log,
        decoded=list(session.decoded),
        cost_by_model=session.ledger.by_model(),
    )
    logger.info(f"{scheduler.name} on {scenario.name} seed {seed}: {tokens} tokens, "
                f"{audited:.3f} units, EWIF {result.empirical_ewif:.4f}")
    return result
