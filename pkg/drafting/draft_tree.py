"""
Draft-token tree for tree-structured speculation.

The root holds the last committed (bonus) token. Every other node is a
drafted token with the acceptance estimate of its incoming edge and the
accumulated acceptance p_acc of the whole root-to-node path. Only leaves
are active; a node stops being active once it gains a child or the
scheduler gives up on it.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence
import logging

from utils.exceptions import DomainError
from .drafters import TokenReference

logger = logging.getLogger(__name__)

DEFAULT_MAX_SIZE = 64
DEFAULT_TOP_K = 3
DEFAULT_TOP_P = 0.2


class TreeNode:
    __slots__ = ('token', 'parent', 'config_id', 'edge_alpha', 'p_acc', 'active',
                 'children', 'depth', 'order')

    def __init__(self, token: int, parent: Optional['TreeNode'], config_id: Optional[str],
                 edge_alpha: float, order: int):
        self.token = token
        self.parent = parent
        self.config_id = config_id
        self.edge_alpha = edge_alpha
        self.p_acc = edge_alpha * parent.p_acc if parent is not None else 1.0
        self.active = True
        self.children: List['TreeNode'] = []
        self.depth = parent.depth + 1 if parent is not None else 0
        self.order = order

    @property
    def is_root(self) -> bool:
        return self.parent is None

    def child_with_token(self, token: int) -> Optional['TreeNode']:
        for child in self.children:
            if child.token == token:
                return child
        return None

    def path_tokens(self) -> List[int]:
        """Drafted tokens from the root (exclusive) down to this node."""
        tokens = []
        node = self
        while node.parent is not None:
            tokens.append(node.token)
            node = node.parent
        tokens.reverse()
        return tokens

    def siblings(self) -> List['TreeNode']:
        if self.parent is None:
            return []
        return [c for c in self.parent.children if c is not self]

    def __repr__(self) -> str:
        return (f"TreeNode(token={self.token}, depth={self.depth}, p_acc={self.p_acc:.4f}, "
                f"config={self.config_id}, active={self.active})")


@dataclass
class TreeVerification:
    """Result of verifying a tree against the truth stream."""
    path: List[TreeNode]
    bonus: int
    accepted: int

    @property
    def tokens(self) -> List[int]:
        """Accepted drafted tokens followed by the bonus token."""
        return [node.token for node in self.path] + [self.bonus]


class DraftTree:
    """Token tree with a hard cap on drafted nodes (the root is not counted)."""

    def __init__(self, root_token: int, max_size: int = DEFAULT_MAX_SIZE):
        if max_size < 0:
            raise DomainError(f"max_size must be >= 0, got {max_size}")
        self.max_size = max_size
        self.root = TreeNode(root_token, None, None, 1.0, order=0)
        self.nodes: List[TreeNode] = [self.root]

    @property
    def size(self) -> int:
        return len(self.nodes) - 1

    @property
    def is_full(self) -> bool:
        return self.size >= self.max_size

    def active_nodes(self) -> List[TreeNode]:
        return [node for node in self.nodes if node.active]

    def best_active_leaf(self) -> Optional[TreeNode]:
        """Active node with the highest p_acc; earliest insertion wins ties."""
        best = None
        for node in self.nodes:
            if node.active and (best is None or node.p_acc > best.p_acc):
                best = node
        return best

    def deactivate(self, node: TreeNode) -> None:
        node.active = False

    def add_child(self, parent: TreeNode, token: int, edge_alpha: float,
                  config_id: Optional[str]) -> TreeNode:
        """Attach one drafted token; a duplicate token under the same parent is merged."""
        existing = parent.child_with_token(token)
        if existing is not None:
            return existing
        if self.is_full:
            raise DomainError(f"tree is full ({self.max_size} drafted nodes)")
        node = TreeNode(token, parent, config_id, edge_alpha, order=len(self.nodes))
        parent.children.append(node)
        parent.active = False
        self.nodes.append(node)
        return node

    def add_chain(self, parent: TreeNode, tokens: Sequence[int], confidences: Sequence[float],
                  config_id: Optional[str]) -> List[TreeNode]:
        """Append tokens as a chain below parent, truncating once the tree is full."""
        chain = []
        for token, alpha in zip(tokens, confidences):
            if self.is_full and parent.child_with_token(token) is None:
                break
            parent = self.add_child(parent, token, alpha, config_id)
            chain.append(parent)
        return chain

    def sibling_expand(self, leaf: TreeNode, rows: Sequence[Sequence[int]],
                       probs: Sequence[Sequence[float]], config_id: Optional[str],
                       top_p: float = DEFAULT_TOP_P, top_k: int = DEFAULT_TOP_K,
                       edge_alpha: Optional[float] = None) -> List[TreeNode]:
        """
        Grow a main chain from rank-0 tokens plus sibling children per row.

        Rank >= 1 candidates whose normalized probability reaches top_p
        (at most top_k - 1 per row) become siblings of that row's main
        token. Edges use the candidate probability unless edge_alpha is set.

        Returns:
            The new nodes in insertion order.
        """
        if not leaf.active:
            raise DomainError("sibling_expand needs an active leaf")
        created = []
        parent = leaf
        for row, row_probs in zip(rows, probs):
            if self.is_full:
                break
            before = len(self.nodes)
            main = self.add_child(parent, row[0], row_probs[0] if edge_alpha is None else edge_alpha,
                                  config_id)
            siblings = 0
            for token, prob in zip(row[1:], row_probs[1:]):
                if siblings >= top_k - 1 or self.is_full:
                    break
                if prob >= top_p:
                    self.add_child(parent, token, prob if edge_alpha is None else edge_alpha, config_id)
                    siblings += 1
            created.extend(self.nodes[before:])
            parent = main
        return created

    def dump(self) -> List[Dict]:
        """Flat node listing (parent index, token, p_acc, config) for step logs."""
        index = {id(node): i for i, node in enumerate(self.nodes)}
        return [
            {
                'index': i,
                'parent': index[id(node.parent)] if node.parent is not None else -1,
                'token': node.token,
                'p_acc': round(node.p_acc, 6),
                'config': node.config_id,
                'active': node.active,
            }
            for i, node in enumerate(self.nodes)
        ]


def verify_tree(tree: DraftTree, truth: TokenReference, position: int) -> TreeVerification:
    """
    Greedy root descent: follow the child matching the truth at each level.

    position is the stream index of the first token after the root. One
    call models one target forward over the whole tree.
    """
    path = []
    node = tree.root
    while True:
        expected = truth.token_at(position + len(path))
        child = node.child_with_token(expected)
        if child is None:
            return TreeVerification(path=path, bonus=expected, accepted=len(path))
        path.append(child)
        node = child
