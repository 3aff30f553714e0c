"""Joining two trees along a common subtree, and pruning the result back to a tree.

For a span ``m1: T_mu -> T1``, ``m2: T_mu -> T2`` the join glues ``m1(c)`` to
``m2(c)`` for every apex node ``c``.  When the apex is a largest common subtree
the join is a DAG whose only defects are *subsumed arcs*: arcs ``(v, w)``
alongside a longer path ``v ~> w``.  Deleting them leaves the sum ``T_sigma``,
a smallest common supertree.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .embeddings import Embedding, EmbeddingKind
from .errors import (
    InternalInvariantError,
    InternalVerificationFailure,
    InvalidSpan,
    KindMismatch,
    NonCommutingProbe,
    NotAnEmbedding,
    NotATreeAfterPruning,
    TreeMismatch,
    TreeValidationError,
)
from .pullback import CospanResult
from .tree import Arc, NodeId, RootedTree, validate_tree

Member = tuple[int, NodeId]  # (side, label) with side 1 or 2


@dataclass(frozen=True)
class SpanResult:
    """A common subtree ``apex`` with embeddings ``left: apex -> T1`` and ``right: apex -> T2``."""

    apex: RootedTree
    left: Embedding
    right: Embedding

    def __post_init__(self) -> None:
        if self.left.source != self.apex or self.right.source != self.apex:
            raise InvalidSpan("both embeddings must start at the apex")
        if self.left.kind != self.right.kind:
            raise KindMismatch(f"span mixes {self.left.kind.short} and {self.right.kind.short}")

    @property
    def kind(self) -> EmbeddingKind:
        return self.left.kind


@dataclass(frozen=True)
class QuotientGraph:
    """The join of a span: classes of the disjoint sum and the induced arc set."""

    kind: EmbeddingKind
    classes: Mapping[NodeId, tuple[Member, ...]]
    arcs: frozenset
    class_of: Mapping[Member, NodeId] = field(repr=False)
    merged: frozenset = field(repr=False)  # names of two-element classes

    @property
    def nodes(self) -> tuple[NodeId, ...]:
        return tuple(sorted(self.classes))

    def ell(self, side: int) -> dict[NodeId, NodeId]:
        return {label: name for (s, label), name in self.class_of.items() if s == side}

    def parents(self, arcs: Iterable[Arc] | None = None) -> dict[NodeId, list[NodeId]]:
        out: dict[NodeId, list[NodeId]] = {v: [] for v in self.classes}
        for a, b in self.arcs if arcs is None else arcs:
            out[b].append(a)
        for v in out:
            out[v].sort()
        return out

    def children(self, arcs: Iterable[Arc] | None = None) -> dict[NodeId, list[NodeId]]:
        out: dict[NodeId, list[NodeId]] = {v: [] for v in self.classes}
        for a, b in self.arcs if arcs is None else arcs:
            out[a].append(b)
        for v in out:
            out[v].sort()
        return out

    def provenance(self, name: NodeId) -> str:
        """Member labels joined by ``|``, T1 side first (``x1|x2``)."""
        return "|".join(label for _, label in self.classes[name])


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    taken.add(name)
    return name


def join(s: SpanResult, debug: bool = False) -> QuotientGraph:
    """Glue ``T1`` and ``T2`` along the span.

    A merged class is named after its ``T1`` member; the rest get a ``1:`` or
    ``2:`` prefix.  Names are primed until unique.
    """
    t1, t2 = s.left.target, s.right.target
    m1, m2 = s.left.mapping, s.right.mapping
    taken: set[str] = set()
    classes: dict[NodeId, tuple[Member, ...]] = {}
    side_of: dict[int, dict[NodeId, NodeId]] = {1: {}, 2: {}}
    for c in s.apex.nodes:
        a, b = m1[c], m2[c]
        name = a if a not in taken else _fresh(a, taken)
        taken.add(name)
        classes[name] = ((1, a), (2, b))
        side_of[1][a] = side_of[2][b] = name
    merged = frozenset(classes)
    for side, t in ((1, t1), (2, t2)):
        own = side_of[side]
        for v in t.nodes:
            if v not in own:
                name = f"{side}:{v}"
                if name in taken:
                    name = _fresh(name, taken)
                taken.add(name)
                classes[name] = ((side, v),)
                own[v] = name
    own1, own2 = side_of[1], side_of[2]
    arcs = {(own1[a], own1[b]) for a, b in t1.arcs}
    arcs.update((own2[a], own2[b]) for a, b in t2.arcs)
    class_of = {(side, v): name for side, own in side_of.items() for v, name in own.items()}
    q = QuotientGraph(s.kind, classes, frozenset(arcs), class_of, merged)
    if debug:
        _check_join_shape(q)
    return q


def _check_join_shape(q: QuotientGraph) -> None:
    parents = q.parents()
    for v, ps in parents.items():
        if len(ps) > 2:
            raise InternalInvariantError(f"class {v!r} has {len(ps)} parents")
        if len(ps) == 2 and v not in q.merged:
            raise InternalInvariantError(f"unmerged class {v!r} has two parents")
    if find_cycle(q.classes, q.arcs) is not None:
        raise InternalInvariantError("join has a directed cycle")


def find_cycle(nodes: Iterable[NodeId], arcs: Iterable[Arc]) -> list[NodeId] | None:
    """A directed cycle as a node list, or ``None`` (iterative three-colour DFS)."""
    nodes = sorted(nodes)
    succ: dict[NodeId, list[NodeId]] = {v: [] for v in nodes}
    for a, b in arcs:
        succ[a].append(b)
    colour = dict.fromkeys(nodes, 0)
    for start in nodes:
        if colour[start]:
            continue
        stack = [(start, iter(sorted(succ[start])))]
        trail = [start]
        colour[start] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[v] = 2
                stack.pop()
                trail.pop()
            elif colour[nxt] == 1:
                return trail[trail.index(nxt):] + [nxt]
            elif colour[nxt] == 0:
                colour[nxt] = 1
                trail.append(nxt)
                stack.append((nxt, iter(sorted(succ[nxt]))))
    return None


@dataclass(frozen=True)
class PruneResult:
    arcs: frozenset
    removed: frozenset


def prune_subsumed_arcs(
    q: QuotientGraph,
    order: Sequence[NodeId] | random.Random | None = None,
    debug: bool = False,
) -> PruneResult:
    """Remove subsumed arcs by scanning classes with two parents.

    For a class ``y`` with parents ``x`` and ``x'``, walk upwards from both at
    once through classes with a single parent; if one walk meets the other
    parent, the arc from that parent to ``y`` is subsumed.  Each walk touches
    only nodes private to one side, so the total work is linear.

    ``order`` permutes the scan (a sequence of class names or an RNG to
    shuffle with); arcs are removed as they are found, and the result does not
    depend on the order.
    """
    parents = q.parents()
    targets = sorted(v for v, ps in parents.items() if len(ps) == 2)
    if isinstance(order, random.Random):
        order.shuffle(targets)
    elif order is not None:
        rank = {v: i for i, v in enumerate(order)}
        targets.sort(key=lambda v: rank.get(v, len(rank)))

    removed: set[Arc] = set()
    cap = len(q.classes) + 1
    for y in targets:
        ps = parents[y]
        if len(ps) != 2:
            continue
        x, x2 = ps
        hit = _race(parents, x, x2, cap)
        if hit is not None:
            ps.remove(hit)
            removed.add((hit, y))

    arcs = frozenset(q.arcs - removed)
    result = PruneResult(arcs, frozenset(removed))
    if debug:
        expected = subsumed_arcs(q)
        if result.removed != expected:
            raise InternalInvariantError(
                f"scan removed {sorted(result.removed)}, declarative check says {sorted(expected)}"
            )
        _check_subsumed_structure(q)
    return result


def _race(parents: Mapping[NodeId, list[NodeId]], x: NodeId, x2: NodeId, cap: int) -> NodeId | None:
    """Return the parent whose arc is subsumed: ``x2`` if ``x ~> x2`` upwards from ``x``, etc."""
    a, b = x, x2
    alive_a = alive_b = True
    for _ in range(cap):
        if not (alive_a or alive_b):
            return None
        if alive_a:
            if a == x2:
                return x2
            up = parents[a]
            if len(up) != 1:
                alive_a = False
            else:
                a = up[0]
        if alive_b:
            if b == x:
                return x
            up = parents[b]
            if len(up) != 1:
                alive_b = False
            else:
                b = up[0]
    raise InternalInvariantError("upward walk did not terminate; the join has a cycle")


def _reachable_without(children: Mapping[NodeId, list[NodeId]], v: NodeId, w: NodeId) -> bool:
    """Is ``w`` reachable from ``v`` without using the arc ``(v, w)``?"""
    stack = [c for c in children[v] if c != w]
    seen = set(stack)
    while stack:
        u = stack.pop()
        if u == w:
            return True
        for c in children[u]:
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return False


def subsumed_arcs(q: QuotientGraph) -> frozenset:
    """Every arc ``(v, w)`` for which the join also has a longer path ``v ~> w``."""
    children = q.children()
    return frozenset((v, w) for v, w in q.arcs if _reachable_without(children, v, w))


def _all_paths(children: Mapping[NodeId, list[NodeId]], v: NodeId, w: NodeId, limit: int = 2) -> list[list[NodeId]]:
    out: list[list[NodeId]] = []
    stack = [(v, [v])]
    while stack and len(out) < limit:
        u, path = stack.pop()
        for c in children[u]:
            if c == w:
                out.append(path + [c])
            else:
                stack.append((c, path + [c]))
    return out


def _check_subsumed_structure(q: QuotientGraph) -> None:
    """Every subsumed arc joins merged classes and has exactly one alternative path,
    whose interior is unmerged and which is admissible for the span's kind."""
    children = q.children()
    for v, w in subsumed_arcs(q):
        if v not in q.merged or w not in q.merged:
            raise InternalInvariantError(f"subsumed arc {(v, w)} touches an unmerged class")
        without = {u: [c for c in cs if (u, c) != (v, w)] for u, cs in children.items()}
        paths = _all_paths(without, v, w)
        if len(paths) != 1:
            raise InternalInvariantError(f"subsumed arc {(v, w)} has {len(paths)} alternative paths")
        inner = paths[0][1:-1]
        if any(u in q.merged for u in inner):
            raise InternalInvariantError(f"alternative path for {(v, w)} crosses a merged class")
        if q.kind == EmbeddingKind.ISOMORPHIC:
            raise InternalInvariantError("isomorphic span produced a subsumed arc")
        if q.kind == EmbeddingKind.HOMEOMORPHIC and any(len(children[u]) != 1 for u in inner):
            raise InternalInvariantError(f"alternative path for {(v, w)} is not elementary")


@dataclass(frozen=True)
class SumResult:
    """The pruned join as a tree, with the embeddings of both sides into it."""

    tree: RootedTree
    left: Embedding
    right: Embedding
    quotient: QuotientGraph = field(repr=False)
    removed: frozenset = field(repr=False)

    @property
    def cospan(self) -> CospanResult:
        return CospanResult(self.tree, self.left, self.right)

    def members(self, name: NodeId) -> tuple[Member, ...]:
        return self.quotient.classes[name]


def tree_sum(s: SpanResult, debug: bool = False, order=None) -> SumResult:
    """Join along the span, prune subsumed arcs, and verify the result.

    Raises :class:`NotATreeAfterPruning` when the pruned join is not a tree,
    which happens when the apex is not a largest common subtree.
    """
    if not isinstance(s, SpanResult):
        raise InvalidSpan("expected a SpanResult")
    kind = s.kind
    t1, t2 = s.left.target, s.right.target
    if debug:
        _check_largest(s)
    q = join(s, debug=debug)
    pruned = prune_subsumed_arcs(q, order=order, debug=debug)
    try:
        tree = validate_tree(q.classes, pruned.arcs)
    except TreeValidationError as exc:
        raise NotATreeAfterPruning(f"pruned join is not a tree ({type(exc).__name__}: {exc})") from exc
    if len(tree) != len(t1) + len(t2) - len(s.apex):
        raise InternalInvariantError("class count disagrees with the size law")
    try:
        left = Embedding(t1, tree, q.ell(1), kind)
        right = Embedding(t2, tree, q.ell(2), kind)
    except NotAnEmbedding as exc:
        raise NotATreeAfterPruning(f"sides do not embed into the pruned join: {exc}") from exc
    return SumResult(tree, left, right, q, pruned.removed)


def _check_largest(s: SpanResult) -> None:
    from .solvers import SolveConfig, lcst_bruteforce

    t1, t2 = s.left.target, s.right.target
    cfg = SolveConfig(kind=s.kind)
    if min(len(t1), len(t2)) > cfg.max_nodes:
        return
    best = lcst_bruteforce(t1, t2, cfg)
    if len(best.apex) != len(s.apex):
        raise InvalidSpan(f"apex has {len(s.apex)} nodes, a largest common subtree has {len(best.apex)}")


def pushout_mediator(s: SpanResult, sigma: SumResult, h1: Embedding, h2: Embedding) -> Embedding:
    """The unique embedding ``f: T_sigma -> X`` with ``f . left = h1`` and ``f . right = h2``."""
    kind = s.kind
    if h1.kind != kind or h2.kind != kind:
        raise KindMismatch("probe embeddings must have the span's kind")
    if h1.source != s.left.target or h2.source != s.right.target:
        raise TreeMismatch("probe embeddings must start at the span's legs")
    if h1.target != h2.target:
        raise NonCommutingProbe("probe embeddings have different targets")
    for c in s.apex.nodes:
        if h1(s.left(c)) != h2(s.right(c)):
            raise NonCommutingProbe(f"h1(m1({c})) != h2(m2({c}))")
    probes = {1: h1, 2: h2}
    f = {name: probes[side](label) for name, ((side, label), *_) in sigma.quotient.classes.items()}
    try:
        return Embedding(sigma.tree, h1.target, f, kind)
    except NotAnEmbedding as exc:
        raise InternalVerificationFailure(f"mediator failed to verify: {exc}") from exc
