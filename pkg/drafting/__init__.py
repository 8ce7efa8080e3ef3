"""
Simulated draft hierarchy.

This module contains:
- Synthetic truth streams standing in for the target model's output
- Draft model specs and hierarchy validation
- Draft/verify primitives for neural-sim drafts and prompt lookup
- The draft-token tree used for tree-structured verification
"""

from .token_stream import TokenStream, make_corpus, is_prefix_of
from .model_spec import (
    AlphaProfile,
    Hierarchy,
    ModelKind,
    ModelSpec,
    counterexample_hierarchy,
    pld_model,
    two_tier_hierarchy,
    validate_hierarchy,
)
from .drafters import DraftResult, ModelReference, TokenReference, draft_step, verify_path
from .prompt_lookup import PromptLookup, pld_draft
from .draft_tree import DraftTree, TreeNode, TreeVerification, verify_tree

__all__ = [
    'TokenStream',
    'make_corpus',
    'is_prefix_of',
    'AlphaProfile',
    'Hierarchy',
    'ModelKind',
    'ModelSpec',
    'counterexample_hierarchy',
    'pld_model',
    'two_tier_hierarchy',
    'validate_hierarchy',
    'DraftResult',
    'ModelReference',
    'TokenReference',
    'draft_step',
    'verify_path',
    'PromptLookup',
    'pld_draft',
    'DraftTree',
    'TreeNode',
    'TreeVerification',
    'verify_tree'
]
