"""Intersections of two trees embedded in a common tree, and the pullback mediator.

Given a cospan ``f1: T1 -> T``, ``f2: T2 -> T`` the intersection has one node
for every apex node hit by both maps, and an arc ``(a, b)`` whenever both
``T1`` and ``T2`` contain a path ``a ~> b`` with no intermediate node in the
intersection.  Equivalently, ``a`` is the nearest proper ancestor of ``b`` that
lies in the intersection, in ``T1`` and in ``T2`` alike; that is how it is
computed here, with one preorder walk per tree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .embeddings import Embedding, EmbeddingKind, left_factor
from .errors import (
    InternalInvariantError,
    InvalidCospan,
    KindMismatch,
    MinorForestUnsupported,
    NonCommutingProbe,
    NotAnEmbedding,
    PreconditionViolation,
    TreeValidationError,
)
from .tree import NodeId, RootedTree, validate_tree

FRESH_ROOT = "⊥"


@dataclass(frozen=True)
class CospanResult:
    """A common supertree ``apex`` with embeddings ``left: T1 -> apex`` and ``right: T2 -> apex``."""

    apex: RootedTree
    left: Embedding
    right: Embedding

    def __post_init__(self) -> None:
        if self.left.target != self.apex or self.right.target != self.apex:
            raise InvalidCospan("both embeddings must land in the apex")
        if self.left.kind != self.right.kind:
            raise KindMismatch(f"cospan mixes {self.left.kind.short} and {self.right.kind.short}")

    @property
    def kind(self) -> EmbeddingKind:
        return self.left.kind


class Shape(enum.Enum):
    TREE = "tree"
    FOREST = "forest"


@dataclass(frozen=True)
class IntersectionResult:
    """The intersection graph of a cospan and the tree built from it.

    Nodes are named by their ``T1`` label; ``pairs`` maps each name to its
    ``(T1 label, T2 label)`` and ``apex_of`` to the apex node both hit.  For a
    forest (only possible with minor embeddings) ``tree`` carries a fresh root
    ``⊥`` whose arcs reach every parentless node, and the inclusions send it to
    the roots of ``T1`` and ``T2``; those extensions are only minor embeddings.
    """

    graph_nodes: tuple[NodeId, ...]
    graph_arcs: frozenset
    shape: Shape
    tree: RootedTree
    fresh_root: NodeId | None
    left_inclusion: Embedding
    right_inclusion: Embedding
    pairs: Mapping[NodeId, tuple[NodeId, NodeId]] = field(repr=False)
    apex_of: Mapping[NodeId, NodeId] = field(repr=False)

    @property
    def parentless(self) -> tuple[NodeId, ...]:
        heads = {b for _, b in self.graph_arcs}
        return tuple(v for v in self.graph_nodes if v not in heads)

    def as_span(self):
        from .pushout import SpanResult

        return SpanResult(self.tree, self.left_inclusion, self.right_inclusion)


def nearest_marked_ancestors(t: RootedTree, marked) -> dict[NodeId, NodeId | None]:
    """For every marked node, its nearest proper ancestor that is marked (or ``None``)."""
    last: dict[NodeId, NodeId | None] = {}
    out: dict[NodeId, NodeId | None] = {}
    parent = t._parent
    for v in t.preorder():
        p = parent[v]
        above = None if p is None else last[p]
        if v in marked:
            out[v] = above
            last[v] = v
        else:
            last[v] = above
    return out


def intersection(c: CospanResult) -> IntersectionResult:
    """Intersection of the two sides of a cospan, extended by a fresh root when it is a forest."""
    if not isinstance(c, CospanResult):
        raise InvalidCospan("expected a CospanResult")
    kind = c.kind
    t1, t2 = c.left.source, c.right.source
    f1, f2 = c.left.mapping, c.right.mapping
    inv2 = c.right.inverse()

    pairs: dict[NodeId, tuple[NodeId, NodeId]] = {}
    apex_of: dict[NodeId, NodeId] = {}
    name_of_t2: dict[NodeId, NodeId] = {}
    for v in t1.nodes:
        w = inv2.get(f1[v])
        if w is not None:
            pairs[v] = (v, w)
            apex_of[v] = f1[v]
            name_of_t2[w] = v

    near1 = nearest_marked_ancestors(t1, pairs)
    near2 = nearest_marked_ancestors(t2, name_of_t2)
    arcs = set()
    for v, (_, w) in pairs.items():
        p1 = near1[v]
        p2 = near2[w]
        if p1 is not None and p2 is not None and name_of_t2[p2] == p1:
            arcs.add((p1, v))

    nodes = tuple(sorted(pairs))
    heads = {b for _, b in arcs}
    roots = [v for v in nodes if v not in heads]
    left_map = {v: v for v in nodes}
    right_map = {v: pairs[v][1] for v in nodes}

    try:
        if len(roots) <= 1:
            tree = validate_tree(nodes, arcs, roots[0] if roots else None)
            shape, fresh, inc_kind = Shape.TREE, None, kind
        else:
            if FRESH_ROOT in pairs:
                raise PreconditionViolation(f"label {FRESH_ROOT!r} is reserved for the fresh root")
            tree = validate_tree(nodes + (FRESH_ROOT,), arcs | {(FRESH_ROOT, r) for r in roots}, FRESH_ROOT)
            left_map[FRESH_ROOT] = t1.root
            right_map[FRESH_ROOT] = t2.root
            shape, fresh, inc_kind = Shape.FOREST, FRESH_ROOT, EmbeddingKind.MINOR
    except TreeValidationError as exc:
        raise InternalInvariantError(f"intersection is not a tree or a forest: {exc}") from exc

    try:
        left = Embedding(tree, t1, left_map, inc_kind)
        right = Embedding(tree, t2, right_map, inc_kind)
    except NotAnEmbedding as exc:
        raise InternalInvariantError(f"intersection inclusion failed to verify: {exc}") from exc

    return IntersectionResult(
        graph_nodes=nodes,
        graph_arcs=frozenset(arcs),
        shape=shape,
        tree=tree,
        fresh_root=fresh,
        left_inclusion=left,
        right_inclusion=right,
        pairs=pairs,
        apex_of=apex_of,
    )


def pullback_mediator(c: CospanResult, r: IntersectionResult, g1: Embedding, g2: Embedding) -> Embedding:
    """The unique embedding ``g: X -> T_p`` with ``left . g = g1`` and ``right . g = g2``.

    ``g1: X -> T1`` and ``g2: X -> T2`` must satisfy ``f1 . g1 = f2 . g2``.
    Minor cospans whose intersection is a forest have no pullback at all, so
    they are refused.
    """
    kind = c.kind
    if g1.kind != kind or g2.kind != kind:
        raise KindMismatch("probe embeddings must have the cospan's kind")
    if kind == EmbeddingKind.MINOR and r.shape is Shape.FOREST:
        raise MinorForestUnsupported("minor cospan with a forest intersection has no pullback")
    if g1.source != g2.source:
        raise NonCommutingProbe("probe embeddings have different sources")
    if g1.target != c.left.source or g2.target != c.right.source:
        raise NonCommutingProbe("probe embeddings do not land in the cospan's legs")
    for x in g1.source.nodes:
        if c.left(g1(x)) != c.right(g2(x)):
            raise NonCommutingProbe(f"f1(g1({x})) != f2(g2({x}))")

    back = r.left_inclusion.inverse()
    g = {}
    for x in g1.source.nodes:
        p = back.get(g1(x))
        if p is None or r.right_inclusion(p) != g2(x):
            raise InternalInvariantError(f"commuting probe misses the intersection at {x!r}")
        g[x] = p
    return left_factor(g, r.left_inclusion, g1, kind)
