"""Rooted-tree embeddings, their intersections and sums, and common sub/supertrees."""

from .category import (
    FailureMode,
    UniversalReport,
    Verdict,
    check_pullback,
    check_pushout,
    replay_pullback,
    replay_pushout,
)
from .embeddings import (
    ALL_KINDS,
    Embedding,
    EmbeddingKind,
    Violation,
    classify_embedding,
    compose,
    embeds,
    enumerate_embeddings,
    find_embedding,
    is_embedding,
    left_factor,
    verify_embedding,
)
from .errors import InternalInvariantError, TreespanError
from .io import export_dot, parse_mapping, parse_tree, serialize_mapping, serialize_tree
from .pullback import CospanResult, IntersectionResult, Shape, intersection, pullback_mediator
from .pushout import QuotientGraph, SpanResult, SumResult, join, prune_subsumed_arcs, pushout_mediator, tree_sum
from .solvers import SolveConfig, canonical_trees, lcst_bruteforce, scst_bruteforce, sub_to_super, super_to_sub
from .tree import (
    RootedTree,
    canonical_encoding,
    least_common_ancestor,
    path_between,
    paths_diverge,
    tree_from_encoding,
    tree_isomorphism,
    trees_isomorphic,
    validate_tree,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
