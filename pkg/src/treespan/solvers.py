"""Largest common subtrees and smallest common supertrees.

The brute-force solvers try every unlabelled tree of a given size, which is
only feasible for small inputs; they serve as oracles.  The two linear-time
conversions turn one optimum into the other.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache

from .embeddings import DEFAULT_MAX_NODES, Embedding, EmbeddingKind, embeds, enumerate_embeddings
from .errors import (
    BoundExceeded,
    InternalInvariantError,
    InvalidCospan,
    NotAnEmbedding,
    NotSmallestSupertree,
    TreeValidationError,
)
from .pullback import CospanResult, nearest_marked_ancestors
from .pushout import SpanResult, tree_sum
from .tree import EMPTY_ENCODING, RootedTree, canonical_encoding, tree_from_encoding, validate_tree

ENV_MAX_NODES = "TREESPAN_MAX_NODES"


def _default_max_nodes() -> int:
    raw = os.environ.get(ENV_MAX_NODES)
    if raw is None:
        return DEFAULT_MAX_NODES
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_MAX_NODES} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"{ENV_MAX_NODES} must be non-negative")
    return value


@dataclass(frozen=True)
class SolveConfig:
    """Kind, input size cap and tie-break rule for the brute-force solvers.

    Ties between optimal trees are broken by the smallest canonical encoding,
    then by the lexicographically least witness embeddings.
    """

    kind: EmbeddingKind = EmbeddingKind.MINOR
    max_nodes: int = field(default_factory=_default_max_nodes)
    tie_break: str = "canonical-then-lex"

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", EmbeddingKind.parse(self.kind))
        if self.tie_break != "canonical-then-lex":
            raise ValueError(f"unknown tie break {self.tie_break!r}")


@lru_cache(maxsize=None)
def canonical_trees(n: int) -> tuple[bytes, ...]:
    """Canonical encodings of all unlabelled rooted trees with ``n`` nodes, sorted."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return (EMPTY_ENCODING,)
    if n == 1:
        return (b"()",)
    found = set()
    for enc in canonical_trees(n - 1):
        t = tree_from_encoding(enc)
        for v in t.nodes:
            grown = RootedTree.from_arcs(set(t.arcs) | {(v, "new")}, root=t.root)
            found.add(canonical_encoding(grown))
    return tuple(sorted(found))


def _least(s: RootedTree, t: RootedTree, kind: EmbeddingKind) -> Embedding:
    maps = enumerate_embeddings(s, t, kind, limit=1, max_nodes=max(len(s), 1))
    if not maps:
        raise InternalInvariantError("witness search found nothing after existence check")
    return maps[0]


def lcst_bruteforce(t1: RootedTree, t2: RootedTree, cfg: SolveConfig | None = None) -> SpanResult:
    """A largest common ``kind`` subtree, by exhaustive search from the top size down."""
    cfg = cfg or SolveConfig()
    kind = cfg.kind
    n = min(len(t1), len(t2))
    if n > cfg.max_nodes:
        raise BoundExceeded(f"largest common subtree search needs {n} nodes, bound is {cfg.max_nodes}")
    for size in range(n, -1, -1):
        for enc in canonical_trees(size):
            u = tree_from_encoding(enc)
            if embeds(u, t1, kind) and embeds(u, t2, kind):
                return SpanResult(u, _least(u, t1, kind), _least(u, t2, kind))
    raise InternalInvariantError("the empty tree embeds everywhere")


def scst_bruteforce(t1: RootedTree, t2: RootedTree, cfg: SolveConfig | None = None) -> CospanResult:
    """A smallest common ``kind`` supertree, by exhaustive search from the bottom size up."""
    cfg = cfg or SolveConfig()
    kind = cfg.kind
    n1, n2 = len(t1), len(t2)
    if max(n1, n2) > cfg.max_nodes:
        raise BoundExceeded(f"inputs have {n1} and {n2} nodes, bound is {cfg.max_nodes}")
    for size in range(max(n1, n2), n1 + n2 + 1):
        for enc in canonical_trees(size):
            u = tree_from_encoding(enc)
            if embeds(t1, u, kind) and embeds(t2, u, kind):
                return CospanResult(u, _least(t1, u, kind), _least(t2, u, kind))
    raise InternalInvariantError("no common supertree up to the sum of the sizes")


def sub_to_super(s: SpanResult, debug: bool = False) -> CospanResult:
    """Smallest common supertree from a largest common subtree, in linear time."""
    return tree_sum(s, debug=debug).cospan


def super_to_sub(c: CospanResult, debug: bool = False) -> SpanResult:
    """Largest common subtree from a smallest common supertree, in linear time.

    Apex nodes hit by both sides are kept; each one's parent becomes its
    nearest kept ancestor.  Nodes are named by their ``T1`` preimage.
    """
    if not isinstance(c, CospanResult):
        raise InvalidCospan("expected a CospanResult")
    kind = c.kind
    t1, t2, apex = c.left.source, c.right.source, c.apex
    if debug:
        _check_smallest(c)
    inv1, inv2 = c.left.inverse(), c.right.inverse()
    both = {v for v in apex.nodes if v in inv1 and v in inv2}
    near = nearest_marked_ancestors(apex, both)
    arcs = {(inv1[p], inv1[v]) for v, p in near.items() if p is not None}
    tops = [v for v, p in near.items() if p is None]
    if len(tops) > 1:
        raise NotSmallestSupertree(
            f"shared nodes form a forest with {len(tops)} roots; the apex is not a smallest common supertree"
        )
    nodes = [inv1[v] for v in both]
    try:
        sub = validate_tree(nodes, arcs, inv1[tops[0]] if tops else None)
        left = Embedding(sub, t1, {v: v for v in nodes}, kind)
        right = Embedding(sub, t2, {inv1[v]: inv2[v] for v in both}, kind)
    except (TreeValidationError, NotAnEmbedding) as exc:
        raise InternalInvariantError(f"shared part of a common supertree failed to verify: {exc}") from exc
    return SpanResult(sub, left, right)


def _check_smallest(c: CospanResult) -> None:
    t1, t2 = c.left.source, c.right.source
    cfg = SolveConfig(kind=c.kind)
    if max(len(t1), len(t2)) > cfg.max_nodes:
        return
    best = scst_bruteforce(t1, t2, cfg)
    if len(best.apex) != len(c.apex):
        raise NotSmallestSupertree(f"apex has {len(c.apex)} nodes, a smallest common supertree has {len(best.apex)}")
