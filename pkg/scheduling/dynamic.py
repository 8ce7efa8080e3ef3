"""
Dynamic tree schedulers: DyTC and the greedy local-speedup baseline.

Both grow the draft tree the same way. Each iteration picks the active leaf
with the highest accumulated acceptance, checks the stop rule there, asks the
objective for the best (configuration, k) pair, drafts with it and attaches
the result below the leaf. They differ only in the objective.

Stop rule: expanding a leaf is pointless once even the cheapest continuation
(one bottom-draft step) cannot reach the minimum local speedup:

    (alpha_dn / c_dn) * p_acc(leaf) < t_min
"""

from typing import TYPE_CHECKING, Callable, List, Optional, Sequence, Set
import logging

from drafting.draft_tree import DraftTree, TreeNode
from .base import Expansion, Scheduler, TreeBuild
from .candidates import CandidateConfig, build_candidates
from .objectives import ConfigChoice, find_best_config, find_best_greedy
from .params import SchedulerParams

if TYPE_CHECKING:
    from simulation.session import DecodeSession

logger = logging.getLogger(__name__)

ChooseFn = Callable[[List[CandidateConfig], List[float], List[float], float, float, TreeNode],
                    Optional[ConfigChoice]]

EXPANDED = 'expanded'
NO_CONFIG = 'no_config'
EXHAUSTED = 'exhausted'


def _width(leaf: TreeNode, config: CandidateConfig, bottom_id: str) -> int:
    # sibling tokens ride along as extra input rows, except for the bottom draft
    if config.top == bottom_id and not config.is_cascade:
        return 1
    return 1 + len(leaf.siblings())


def _attach(tree: DraftTree, leaf: TreeNode, config: CandidateConfig, outcome,
            alpha_hat: float, params: SchedulerParams) -> List[TreeNode]:
    if params.sibling_expansion and outcome.candidates is not None:
        edge_alpha = None if params.use_token_confidence else alpha_hat
        return tree.sibling_expand(leaf, outcome.candidates, outcome.candidate_probs, config.id,
                                   top_p=params.top_p, top_k=params.top_k, edge_alpha=edge_alpha)
    confidences = (outcome.confidences if params.use_token_confidence
                   else [alpha_hat] * len(outcome.tokens))
    return tree.add_chain(leaf, outcome.tokens, confidences, config.id)


def _expand_leaf(session: 'DecodeSession', params: SchedulerParams, build: TreeBuild,
                 leaf: TreeNode, candidates: Sequence[CandidateConfig], choose: ChooseFn,
                 alpha_dn: float, cost_dn: float) -> str:
    estimates = session.estimates
    bottom_id = session.hierarchy.bottom_model.id
    position = session.position + leaf.depth
    excluded: Set[str] = set()

    while True:
        pool = [c for c in candidates if c.id not in excluded]
        if not pool:
            return EXHAUSTED
        alphas = [estimates.alpha(c, position) for c in pool]
        costs = [estimates.cost(c, _width(leaf, c, bottom_id), position) for c in pool]
        choice = choose(pool, alphas, costs, alpha_dn, cost_dn, leaf)
        if choice is None:
            return NO_CONFIG

        config = choice.config
        num_candidates = 1 if config.is_cascade else params.num_candidates
        # tokens past the size cap would be drafted and paid for, then dropped
        k = min(choice.k, build.tree.max_size - build.tree.size)
        outcome = session.executor.draft(config, position, k, suffix=leaf.path_tokens(),
                                         num_candidates=num_candidates,
                                         width=_width(leaf, config, bottom_id))
        build.charges.extend(outcome.charges)
        build.observations.extend(outcome.observations)
        if outcome.is_empty:
            # prompt lookup found no match below this leaf
            excluded.add(config.id)
            build.empty_drafts.append((config.id, config.estimator_key, leaf.depth))
            continue

        nodes = _attach(build.tree, leaf, config, outcome, alphas[choice.index], params)
        build.expansions.append(Expansion(
            config_id=config.id,
            k=k,
            depth=leaf.depth,
            drafted=len(outcome.tokens),
            nodes=nodes,
            objective=choice.objective,
            runner_up=None if choice.runner_up is None else choice.runner_up.id,
            runner_up_k=choice.runner_up_k,
            runner_up_objective=choice.runner_up_objective,
            estimator_key=config.estimator_key,
        ))
        logger.debug(f"Expanded depth {leaf.depth} with {config.id} k={choice.k} "
                     f"(objective {choice.objective:.4f})")
        return EXPANDED


def expand_tree(session: 'DecodeSession', params: SchedulerParams,
                candidates: Sequence[CandidateConfig], choose: ChooseFn) -> TreeBuild:
    """Leaf-by-leaf tree growth shared by DyTC and greedy."""
    tree = DraftTree(session.root_token, params.max_size)
    build = TreeBuild(tree=tree, stop_reason='size_limit')

    while tree.size < params.max_size:
        leaf = tree.best_active_leaf()
        if leaf is None:
            build.stop_reason = 'no_active_leaf'
            break

        alpha_dn, cost_dn = session.estimates.bottom(session.position + leaf.depth)
        if alpha_dn / cost_dn * leaf.p_acc < params.t_min:
            tree.deactivate(leaf)
            build.stop_reason = 'stop_rule'
            break

        status = _expand_leaf(session, params, build, leaf, candidates, choose, alpha_dn, cost_dn)
        tree.deactivate(leaf)
        if status == NO_CONFIG:
            build.stop_reason = NO_CONFIG
            break

    logger.debug(f"Tree built: size {tree.size}, {len(build.expansions)} expansions, "
                 f"stop={build.stop_reason}")
    return build


def dytc_generate(session: 'DecodeSession', params: Optional[SchedulerParams] = None) -> TreeBuild:
    """Grow a draft tree choosing (configuration, k) by the least-future-speedup objective."""
    params = params or session.params
    candidates = build_candidates(session.hierarchy, params.candidate_set)

    def choose(pool, alphas, costs, alpha_dn, cost_dn, leaf):
        return find_best_config(pool, alphas, costs, alpha_dn, cost_dn, params.k_max)

    return expand_tree(session, params, candidates, choose)


def greedy_schedule(session: 'DecodeSession', params: Optional[SchedulerParams] = None) -> TreeBuild:
    """Grow a draft tree maximizing the predicted local speedup of each step alone."""
    params = params or session.params
    candidates = build_candidates(session.hierarchy, params.candidate_set)

    def choose(pool, alphas, costs, alpha_dn, cost_dn, leaf):
        return find_best_greedy(pool, alphas, costs, params.k_max, p_acc=leaf.p_acc,
                                verify_cost=params.greedy_verify_cost)

    return expand_tree(session, params, candidates, choose)


class DyTCScheduler(Scheduler):
    name = 'dytc'
    uses_estimates = True

    def build_tree(self, session: 'DecodeSession') -> TreeBuild:
        return dytc_generate(session, self.params)


class GreedyScheduler(Scheduler):
    name = 'greedy'
    uses_estimates = True

    def build_tree(self, session: 'DecodeSession') -> TreeBuild:
        return greedy_schedule(session, self.params)
