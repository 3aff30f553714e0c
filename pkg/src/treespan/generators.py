"""Seeded random trees, embeddings, spans and cospans for property testing."""

from __future__ import annotations

import random

from .embeddings import Embedding, EmbeddingKind, is_embedding
from .pullback import CospanResult
from .tree import NodeId, RootedTree, validate_tree


def random_tree(n: int, rng: random.Random, prefix: str = "v") -> RootedTree:
    """Random recursive tree on ``n`` nodes; labels are shuffled so they carry no structure."""
    if n <= 0:
        return RootedTree.empty()
    labels = [f"{prefix}{i}" for i in range(n)]
    rng.shuffle(labels)
    arcs = [(labels[rng.randrange(i)], labels[i]) for i in range(1, n)]
    return validate_tree(labels, arcs, labels[0])


def path_tree(n: int, prefix: str = "p") -> RootedTree:
    labels = [f"{prefix}{i}" for i in range(n)]
    return validate_tree(labels, zip(labels, labels[1:]), labels[0] if labels else None)


def star_tree(n: int, prefix: str = "s") -> RootedTree:
    labels = [f"{prefix}{i}" for i in range(n)]
    return validate_tree(labels, [(labels[0], v) for v in labels[1:]], labels[0] if labels else None)


def subdivide(t: RootedTree, prefix: str = "m:") -> RootedTree:
    """``t`` with a new node inserted on every arc; the new node above ``b`` is ``prefix + b``.

    ``t`` embeds into the result homeomorphically through the identity map.
    """
    arcs = []
    for a, b in t.arcs:
        mid = prefix + b
        arcs += [(a, mid), (mid, b)]
    nodes = list(t.nodes) + [prefix + b for _, b in t.arcs]
    return validate_tree(nodes, arcs, t.root)


def induced_subtree(t: RootedTree, chosen) -> RootedTree | None:
    """The tree on ``chosen`` whose arcs join each node to its nearest chosen ancestor, or
    ``None`` when that is a forest."""
    chosen = set(chosen)
    last: dict[NodeId, NodeId | None] = {}
    arcs = []
    tops = 0
    for v in t.preorder():
        p = t.parent(v)
        above = None if p is None else last[p]
        if v in chosen:
            if above is None:
                tops += 1
            else:
                arcs.append((above, v))
            last[v] = v
        else:
            last[v] = above
    if tops > 1:
        return None
    return validate_tree(chosen, arcs)


def _grow(t: RootedTree, rng: random.Random, size: int, kind: EmbeddingKind) -> set[NodeId]:
    start = rng.choice(t.nodes)
    chosen = {start}
    frontier = [start]
    for _ in range(4 * size):
        if len(chosen) >= size:
            break
        v = rng.choice(frontier)
        if kind == EmbeddingKind.ISOMORPHIC:
            pool = [c for c in t.children(v) if c not in chosen]
        else:
            pool = [w for w in t.nodes if w not in chosen and t.is_ancestor(v, w)]
        if pool:
            w = rng.choice(pool)
            chosen.add(w)
            frontier.append(w)
    return chosen


def random_subtree(
    t: RootedTree, kind: EmbeddingKind, rng: random.Random, prefix: str = "u", tries: int = 20
) -> Embedding:
    """A random ``kind`` embedding into ``t`` from a freshly labelled tree.

    Node sets are grown from a random start and kept when the induced tree
    embeds at ``kind``; after ``tries`` failures a single node is used.
    """
    kind = EmbeddingKind.parse(kind)
    if t.is_empty():
        return Embedding(RootedTree.empty(), t, {}, kind)
    for _ in range(tries):
        size = rng.randint(1, len(t))
        chosen = _grow(t, rng, size, kind)
        sub = induced_subtree(t, chosen)
        if sub is not None and is_embedding(sub, t, {v: v for v in sub.nodes}, kind):
            break
    else:
        sub = RootedTree.single(rng.choice(t.nodes))
    fresh = [f"{prefix}{i}" for i in range(len(sub))]
    rng.shuffle(fresh)
    rename = dict(zip(sub.nodes, fresh))
    return Embedding(sub.relabel(rename), t, {rename[v]: v for v in sub.nodes}, kind)


def random_embedding(rng: random.Random, kind: EmbeddingKind, max_nodes: int = 7) -> Embedding:
    t = random_tree(rng.randint(1, max_nodes), rng, prefix="t")
    return random_subtree(t, kind, rng, prefix="s")


def random_cospan(rng: random.Random, kind: EmbeddingKind, max_nodes: int = 7) -> CospanResult:
    """Two random ``kind`` subtrees of one random tree with at most ``max_nodes`` nodes."""
    t = random_tree(rng.randint(1, max_nodes), rng, prefix="t")
    return CospanResult(t, random_subtree(t, kind, rng, prefix="a"), random_subtree(t, kind, rng, prefix="b"))
