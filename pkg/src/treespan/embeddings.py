"""The four embedding kinds between rooted trees and their verification.

An embedding is an injective node map that sends every arc ``(a, b)`` of the
source to a path ``f(a) ~> f(b)`` of the target with no intermediate node in
the image of ``f``.  The kinds add conditions on top of that:

* ``MINOR``: nothing more.
* ``TOPOLOGICAL``: paths leaving the image of a common parent diverge.
* ``HOMEOMORPHIC``: every path is elementary (intermediate out-degree 1).
* ``ISOMORPHIC``: every path is an arc.

Each kind implies the weaker ones, so ``EmbeddingKind`` is ordered by strength.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import (
    BoundExceeded,
    CompositionMismatch,
    CompositionNotClosed,
    InternalInvariantError,
    KindMismatch,
    NotAnEmbedding,
    PartialMapping,
    PreconditionViolation,
    TreeMismatch,
    ValueOutsideTarget,
)
from .tree import NodeId, RootedTree, canonical_encoding, tree_from_encoding

DEFAULT_MAX_NODES = 8


class EmbeddingKind(enum.IntEnum):
    MINOR = 0
    TOPOLOGICAL = 1
    HOMEOMORPHIC = 2
    ISOMORPHIC = 3

    @property
    def short(self) -> str:
        return _SHORT[self]

    @classmethod
    def parse(cls, text: str | "EmbeddingKind") -> "EmbeddingKind":
        if isinstance(text, EmbeddingKind):
            return text
        key = text.strip().lower()
        for kind, names in _ALIASES.items():
            if key in names:
                return kind
        raise ValueError(f"unknown embedding kind {text!r}")

    def weaker(self) -> "EmbeddingKind | None":
        return None if self == EmbeddingKind.MINOR else EmbeddingKind(self - 1)

    def stronger(self) -> "EmbeddingKind | None":
        return None if self == EmbeddingKind.ISOMORPHIC else EmbeddingKind(self + 1)


_SHORT = {
    EmbeddingKind.MINOR: "minor",
    EmbeddingKind.TOPOLOGICAL: "topological",
    EmbeddingKind.HOMEOMORPHIC: "homeomorphic",
    EmbeddingKind.ISOMORPHIC: "isomorphic",
}
_ALIASES = {
    EmbeddingKind.MINOR: {"minor", "min"},
    EmbeddingKind.TOPOLOGICAL: {"topological", "top", "topo"},
    EmbeddingKind.HOMEOMORPHIC: {"homeomorphic", "hom", "homeo"},
    EmbeddingKind.ISOMORPHIC: {"isomorphic", "iso"},
}

ALL_KINDS = tuple(sorted(EmbeddingKind, reverse=True))  # strongest first


@dataclass(frozen=True)
class Violation:
    """Why a map fails to be an embedding.

    ``condition`` is one of ``not-injective``, ``no-path``,
    ``intermediate-in-image``, ``not-elementary``, ``not-arc``,
    ``not-divergent``.
    """

    condition: str
    arc: tuple[NodeId, NodeId] | None = None
    node: NodeId | None = None

    def __str__(self) -> str:
        where = f" on arc {self.arc[0]}->{self.arc[1]}" if self.arc else ""
        at = f" at node {self.node}" if self.node is not None else ""
        return f"{self.condition}{where}{at}"


@dataclass(frozen=True)
class VerifyResult:
    kind: EmbeddingKind
    violation: Violation | None = None

    @property
    def ok(self) -> bool:
        return self.violation is None

    def __bool__(self) -> bool:
        return self.ok


def _check_total(s: RootedTree, t: RootedTree, mapping: Mapping[NodeId, NodeId]) -> None:
    missing = [v for v in s.nodes if v not in mapping]
    if missing:
        raise PartialMapping(f"mapping undefined on {missing}")
    if len(mapping) != len(s):
        extra = sorted(set(mapping) - set(s.nodes))
        raise PartialMapping(f"mapping defined on non-source nodes {extra}")
    for v in s.nodes:
        if mapping[v] not in t:
            raise ValueOutsideTarget(f"{v!r} is mapped to {mapping[v]!r}, not a target node")


def verify_embedding(
    s: RootedTree, t: RootedTree, mapping: Mapping[NodeId, NodeId], kind: EmbeddingKind
) -> VerifyResult:
    """Check whether ``mapping`` is an embedding of ``kind``; report the first failure.

    Arcs are examined in source preorder.  Cost is proportional to the
    total length of the image paths.
    """
    kind = EmbeddingKind.parse(kind)
    _check_total(s, t, mapping)
    image: dict[NodeId, NodeId] = {}
    for v in s.nodes:
        w = mapping[v]
        if w in image:
            return VerifyResult(kind, Violation("not-injective", node=w))
        image[w] = v

    parent = t._parent
    children = t._children
    tin, tout = t._tin, t._tout
    source_parent = s._parent
    first_steps: dict[NodeId, set[NodeId]] = {}
    for b in s.preorder():
        a = source_parent[b]
        if a is None:
            continue
        fa, fb = mapping[a], mapping[b]
        if not (tin[fa] <= tin[fb] and tout[fb] <= tout[fa]):
            return VerifyResult(kind, Violation("no-path", (a, b)))
        if kind == EmbeddingKind.ISOMORPHIC:
            if parent[fb] != fa:
                return VerifyResult(kind, Violation("not-arc", (a, b)))
            continue
        step = fb
        u = parent[fb]
        while u != fa:
            if u in image:
                return VerifyResult(kind, Violation("intermediate-in-image", (a, b), u))
            if kind == EmbeddingKind.HOMEOMORPHIC and len(children[u]) != 1:
                return VerifyResult(kind, Violation("not-elementary", (a, b), u))
            step = u
            u = parent[u]
        if kind == EmbeddingKind.TOPOLOGICAL:
            seen = first_steps.setdefault(a, set())
            if step in seen:
                return VerifyResult(kind, Violation("not-divergent", (a, b), step))
            seen.add(step)
    return VerifyResult(kind)


def is_embedding(s: RootedTree, t: RootedTree, mapping: Mapping[NodeId, NodeId], kind: EmbeddingKind) -> bool:
    return verify_embedding(s, t, mapping, kind).ok


def classify_embedding(s: RootedTree, t: RootedTree, mapping: Mapping[NodeId, NodeId]) -> EmbeddingKind | None:
    """Strongest kind at which ``mapping`` is an embedding, or ``None``."""
    for kind in ALL_KINDS:
        if verify_embedding(s, t, mapping, kind):
            return kind
    return None


@dataclass(frozen=True, eq=False)
class Embedding:
    """A verified embedding ``source -> target`` of a given kind.

    Construction fails with :class:`NotAnEmbedding` if the map does not verify.
    """

    source: RootedTree
    target: RootedTree
    mapping: Mapping[NodeId, NodeId]
    kind: EmbeddingKind
    _image: frozenset = field(init=False, repr=False)

    def __post_init__(self) -> None:
        kind = EmbeddingKind.parse(self.kind)
        mapping = MappingProxyType(dict(self.mapping))
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "mapping", mapping)
        result = verify_embedding(self.source, self.target, mapping, kind)
        if not result:
            raise NotAnEmbedding(f"not a {kind.short} embedding: {result.violation}", result.violation)
        object.__setattr__(self, "_image", frozenset(mapping.values()))

    @classmethod
    def identity(cls, t: RootedTree, kind: EmbeddingKind = EmbeddingKind.ISOMORPHIC) -> "Embedding":
        return cls(t, t, {v: v for v in t.nodes}, kind)

    def __call__(self, v: NodeId) -> NodeId:
        return self.mapping[v]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Embedding):
            return NotImplemented
        return (
            self.kind == other.kind
            and dict(self.mapping) == dict(other.mapping)
            and self.source == other.source
            and self.target == other.target
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def image(self) -> frozenset:
        return self._image

    def inverse(self) -> dict[NodeId, NodeId]:
        return {w: v for v, w in self.mapping.items()}

    def as_kind(self, kind: EmbeddingKind) -> "Embedding":
        """Same map re-verified at another kind (always succeeds for weaker kinds)."""
        return Embedding(self.source, self.target, self.mapping, kind)

    def key(self) -> tuple[NodeId, ...]:
        """Images listed in sorted source-label order; used for lexicographic ordering."""
        return tuple(self.mapping[v] for v in self.source.nodes)

    def __repr__(self) -> str:
        pairs = ", ".join(f"{v}->{self.mapping[v]}" for v in self.source.nodes)
        return f"Embedding[{self.kind.short}]({pairs})"


def compose(g: Embedding, f: Embedding) -> Embedding:
    """``g . f``: first ``f``, then ``g``."""
    if f.target != g.source:
        raise TreeMismatch("target of f is not the source of g")
    if f.kind != g.kind:
        raise KindMismatch(f"cannot compose {f.kind.short} with {g.kind.short}")
    mapping = {v: g.mapping[w] for v, w in f.mapping.items()}
    try:
        return Embedding(f.source, g.target, mapping, f.kind)
    except NotAnEmbedding as exc:
        if f.kind is EmbeddingKind.HOMEOMORPHIC:
            raise CompositionNotClosed(f"composite is not homeomorphic: {exc}", exc.violation) from exc
        raise InternalInvariantError(f"composition of embeddings failed to verify: {exc}") from exc


def left_factor(
    f: Mapping[NodeId, NodeId], g: Embedding, gf: Embedding, kind: EmbeddingKind
) -> Embedding:
    """Given embeddings ``g: T -> U`` and ``g . f: S -> U``, return ``f: S -> T`` as an embedding.

    The factor of two embeddings of the same kind is always an embedding of
    that kind; a verification failure here is a bug.
    """
    kind = EmbeddingKind.parse(kind)
    for name, e in (("g", g), ("g.f", gf)):
        if e.kind < kind:
            raise PreconditionViolation(f"{name} is only a {e.kind.short} embedding, not {kind.short}")
    if gf.target != g.target:
        raise TreeMismatch("g and g.f have different targets")
    f = dict(f)
    for v in gf.source.nodes:
        if v not in f or f[v] not in g.source:
            raise CompositionMismatch(f"f is not a map from the source of g.f into the source of g at {v!r}")
        if g.mapping[f[v]] != gf.mapping[v]:
            raise CompositionMismatch(f"g(f({v})) != (g.f)({v})")
    if len(f) != len(gf.source):
        raise CompositionMismatch("f is defined outside the source of g.f")
    try:
        return Embedding(gf.source, g.source, f, kind)
    except NotAnEmbedding as exc:
        raise InternalInvariantError(f"left factor is not an embedding: {exc}") from exc


def _search(
    s: RootedTree,
    t: RootedTree,
    kind: EmbeddingKind,
    fixed: Mapping[NodeId, NodeId] | None = None,
    first_only: bool = False,
) -> list[dict[NodeId, NodeId]]:
    """Backtracking over source nodes in preorder with arc-path pruning."""
    if not s.nodes:
        return [{}]
    if len(s) > len(t):
        return []
    fixed = fixed or {}
    order = s.preorder()
    parent_s = s._parent
    children_t = t._children
    assign: dict[NodeId, NodeId] = {}
    used: set[NodeId] = set()
    blocked: Counter = Counter()
    steps: dict[NodeId, set[NodeId]] = {}
    found: list[dict[NodeId, NodeId]] = []
    iso = kind == EmbeddingKind.ISOMORPHIC
    hom = kind == EmbeddingKind.HOMEOMORPHIC
    top = kind == EmbeddingKind.TOPOLOGICAL

    def candidates(fa: NodeId):
        # Yields (w, intermediates, first_step) for admissible images below fa.
        if iso:
            for w in children_t[fa]:
                yield w, (), w
            return
        stack = [(c, (), c) for c in reversed(children_t[fa])]
        while stack:
            w, mids, first = stack.pop()
            yield w, mids, first
            if w in used:
                continue
            if hom and len(children_t[w]) != 1:
                continue
            inner = mids + (w,)
            for c in reversed(children_t[w]):
                stack.append((c, inner, first))

    def place(i: int) -> bool:
        if i == len(order):
            found.append(dict(assign))
            return first_only
        b = order[i]
        want = fixed.get(b)
        a = parent_s[b]
        if a is None:
            pool = [(w, (), None) for w in t.preorder()]
        else:
            pool = candidates(assign[a])
        for w, mids, first in pool:
            if w in used or blocked[w]:
                continue
            if want is not None and w != want:
                continue
            if top and a is not None:
                sib = steps.setdefault(a, set())
                if first in sib:
                    continue
                sib.add(first)
            assign[b] = w
            used.add(w)
            for m in mids:
                blocked[m] += 1
            stop = place(i + 1)
            for m in mids:
                blocked[m] -= 1
            used.discard(w)
            del assign[b]
            if top and a is not None:
                steps[a].discard(first)
            if stop:
                return True
        return False

    place(0)
    return found


def enumerate_embeddings(
    s: RootedTree,
    t: RootedTree,
    kind: EmbeddingKind,
    limit: int | None = None,
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
    fixed: Mapping[NodeId, NodeId] | None = None,
) -> list[Embedding]:
    """All ``kind`` embeddings of ``s`` into ``t`` in lexicographic order, truncated at ``limit``.

    Lexicographic order compares the image tuples listed by sorted source
    label.  ``fixed`` pins some source nodes to given targets.
    """
    kind = EmbeddingKind.parse(kind)
    if len(s) > max_nodes:
        raise BoundExceeded(f"source has {len(s)} nodes, bound is {max_nodes}")
    maps = _search(s, t, kind, fixed)
    maps.sort(key=lambda m: tuple(m[v] for v in s.nodes))
    if limit is not None:
        maps = maps[:limit]
    return [Embedding(s, t, m, kind) for m in maps]


def find_embedding(
    s: RootedTree, t: RootedTree, kind: EmbeddingKind, fixed: Mapping[NodeId, NodeId] | None = None
) -> Embedding | None:
    """Some embedding (the first met by the search, not necessarily the least), or ``None``."""
    kind = EmbeddingKind.parse(kind)
    maps = _search(s, t, kind, fixed, first_only=True)
    return Embedding(s, t, maps[0], kind) if maps else None


@lru_cache(maxsize=None)
def _embeds_canonical(enc_s: bytes, enc_t: bytes, kind: EmbeddingKind) -> bool:
    s, t = tree_from_encoding(enc_s), tree_from_encoding(enc_t, prefix="m")
    return bool(_search(s, t, kind, first_only=True))


def embeds(s: RootedTree, t: RootedTree, kind: EmbeddingKind) -> bool:
    """Whether any ``kind`` embedding ``s -> t`` exists (memoised on isomorphism classes)."""
    if len(s) > len(t):
        return False
    return _embeds_canonical(canonical_encoding(s), canonical_encoding(t), EmbeddingKind.parse(kind))


def graph_isomorphism(s: RootedTree, t: RootedTree, mapping: Mapping[NodeId, NodeId]) -> bool:
    """``mapping`` is a bijection with ``(a, b)`` an arc iff ``(f(a), f(b))`` is."""
    if len(s) != len(t) or set(mapping) != set(s.nodes) or set(mapping.values()) != set(t.nodes):
        return False
    return {(mapping[a], mapping[b]) for a, b in s.arcs} == set(t.arcs)


def mapping_key(mapping: Mapping[NodeId, NodeId]) -> tuple[tuple[NodeId, NodeId], ...]:
    return tuple(sorted(mapping.items()))


def restrict(mapping: Mapping[NodeId, NodeId], nodes: Iterable[NodeId]) -> dict[NodeId, NodeId]:
    return {v: mapping[v] for v in nodes}
