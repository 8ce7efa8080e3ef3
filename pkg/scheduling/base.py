"""
Scheduler interface shared by DyTC, the greedy baseline and the static schedules.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, List, Optional, Tuple
import logging

from drafting.draft_tree import DraftTree, TreeNode
from estimation.latency_model import LatencyObservation
from .executor import Charge
from .params import SchedulerParams

if TYPE_CHECKING:
    from simulation.session import DecodeSession

logger = logging.getLogger(__name__)


@dataclass
class Expansion:
    """One leaf expansion: which configuration drafted how many tokens where."""
    config_id: str
    k: int
    depth: int
    drafted: int
    nodes: List[TreeNode] = field(default_factory=list, repr=False)
    objective: Optional[float] = None
    runner_up: Optional[str] = None
    runner_up_k: Optional[int] = None
    runner_up_objective: Optional[float] = None
    estimator_key: str = ''

    @property
    def first_node(self) -> Optional[TreeNode]:
        return self.nodes[0] if self.nodes else None

    def as_record(self) -> dict:
        record = {'config': self.config_id, 'k': self.k, 'depth': self.depth, 'drafted': self.drafted}
        if self.objective is not None:
            record['objective'] = round(self.objective, 6)
            record['runner_up'] = self.runner_up
            record['runner_up_k'] = self.runner_up_k
            record['runner_up_objective'] = (None if self.runner_up_objective is None
                                             else round(self.runner_up_objective, 6))
        return record


@dataclass
class TreeBuild:
    """A finished draft tree and everything it cost to build."""
    tree: DraftTree
    expansions: List[Expansion] = field(default_factory=list)
    stop_reason: str = ''
    charges: List[Charge] = field(default_factory=list)
    observations: List[LatencyObservation] = field(default_factory=list)
    # (config id, estimator key, depth) of drafts that came back empty
    empty_drafts: List[Tuple[str, str, int]] = field(default_factory=list)

    @property
    def cost_units(self) -> float:
        return sum(c.units for c in self.charges)

    def expansion_at_root(self) -> Optional[Expansion]:
        """The expansion that produced the first edge below the root."""
        for expansion in self.expansions:
            if expansion.depth == 0:
                return expansion
        return None


class Scheduler(ABC):
    """Builds one draft tree per verify cycle."""

    name: str = 'scheduler'
    uses_estimates: bool = False

    def __init__(self, params: Optional[SchedulerParams] = None):
        self.params = params or SchedulerParams()

    def new_tree(self, session: 'DecodeSession') -> DraftTree:
        return DraftTree(session.root_token, self.params.max_size)

    @abstractmethod
    def build_tree(self, session: 'DecodeSession') -> TreeBuild:
        ...

    def describe(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.describe()!r})"
