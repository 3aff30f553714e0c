"""Bounded checks of the pullback and pushout universal properties.

Every probe tree up to a node bound is tried, with every pair of probe
embeddings that commutes with the diagram.  For each probe the candidate must
admit exactly one mediating embedding.  The first failing probe, in order of
(size, canonical encoding, first map, second map), is reported; it can be
replayed with :func:`replay_pullback` or :func:`replay_pushout`.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .embeddings import EmbeddingKind, enumerate_embeddings, is_embedding
from .errors import BoundExceeded, InvalidCospan, InvalidSpan, PreconditionViolation
from .pullback import CospanResult, IntersectionResult
from .pushout import SpanResult, SumResult
from .solvers import canonical_trees
from .tree import NodeId, RootedTree, tree_from_encoding

DEFAULT_MAX_BOUND = 6


class Verdict(enum.Enum):
    VERIFIED = "VerifiedUpToBound"
    COUNTEREXAMPLE = "CounterexampleFound"


class FailureMode(enum.Enum):
    NO_MEDIATOR = "NoMediator"
    NOT_EMBEDDING = "MediatorNotEmbedding"
    MULTIPLE = "MultipleMediators"


@dataclass(frozen=True)
class Probe:
    tree: RootedTree
    first: Mapping[NodeId, NodeId]
    second: Mapping[NodeId, NodeId]

    def describe(self) -> str:
        fmt = lambda m: ", ".join(f"{k}->{m[k]}" for k in sorted(m))  # noqa: E731
        return f"X={self.tree!r}; first: {{{fmt(self.first)}}}; second: {{{fmt(self.second)}}}"


@dataclass(frozen=True)
class Counterexample:
    probe: Probe
    mode: FailureMode
    node_maps: int  # node maps satisfying both equations
    embeddings: int  # how many of those are embeddings

    def __str__(self) -> str:
        return f"{self.mode.value}: {self.probe.describe()}"


@dataclass(frozen=True)
class UniversalReport:
    verdict: Verdict
    bound: int
    kind: EmbeddingKind
    probes_checked: int
    counterexample: Counterexample | None = None

    @property
    def ok(self) -> bool:
        return self.verdict is Verdict.VERIFIED

    def __str__(self) -> str:
        head = f"{self.verdict.value} (kind={self.kind.short}, bound={self.bound}, probes={self.probes_checked})"
        return head if self.counterexample is None else f"{head}\n{self.counterexample}"


def _judge(
    source: RootedTree,
    target: RootedTree,
    options: Sequence[Sequence[NodeId]],
    kind: EmbeddingKind,
) -> tuple[FailureMode | None, int, int]:
    """Count mediators given allowed images per source node (in ``source.nodes`` order)."""
    total = 1
    for opts in options:
        total *= len(opts)
    if total == 0:
        return FailureMode.NO_MEDIATOR, 0, 0
    good = 0
    for images in itertools.product(*options):
        if is_embedding(source, target, dict(zip(source.nodes, images)), kind):
            good += 1
            if good > 1:
                break
    if good == 0:
        return FailureMode.NOT_EMBEDDING, total, 0
    if good > 1:
        return FailureMode.MULTIPLE, total, good
    return None, total, 1


def _probe_trees(bound: int, max_bound: int):
    if bound < 0:
        raise ValueError("bound must be non-negative")
    if bound > max_bound:
        raise BoundExceeded(f"probe bound {bound} exceeds the limit {max_bound}")
    for n in range(bound + 1):
        for enc in canonical_trees(n):
            yield tree_from_encoding(enc, prefix="x")


# -- pullbacks ---------------------------------------------------------------


def _as_span(candidate) -> SpanResult:
    if isinstance(candidate, IntersectionResult):
        return candidate.as_span()
    if isinstance(candidate, SpanResult):
        return candidate
    raise InvalidSpan("pullback candidate must be a SpanResult or IntersectionResult")


def _check_cone(c: CospanResult, p: SpanResult) -> None:
    if p.left.target != c.left.source or p.right.target != c.right.source:
        raise InvalidSpan("candidate legs do not land in the cospan's sides")
    if p.kind < c.kind:
        raise PreconditionViolation(f"candidate legs are {p.kind.short}, cospan is {c.kind.short}")
    for v in p.apex.nodes:
        if c.left(p.left(v)) != c.right(p.right(v)):
            raise InvalidSpan(f"candidate does not commute at {v!r}")


def _pullback_outcome(c: CospanResult, p: SpanResult, probe: Probe):
    by_pair: dict[tuple[NodeId, NodeId], list[NodeId]] = {}
    for v in p.apex.nodes:
        by_pair.setdefault((p.left(v), p.right(v)), []).append(v)
    options = [by_pair.get((probe.first[x], probe.second[x]), []) for x in probe.tree.nodes]
    return _judge(probe.tree, p.apex, options, c.kind)


def check_pullback(c: CospanResult, candidate, bound: int, max_bound: int = DEFAULT_MAX_BOUND) -> UniversalReport:
    """Check that ``candidate`` is a pullback of ``c`` against every probe with at most ``bound`` nodes."""
    if not isinstance(c, CospanResult):
        raise InvalidCospan("expected a CospanResult")
    p = _as_span(candidate)
    _check_cone(c, p)
    kind = c.kind
    t1 = c.left.source
    inv2 = c.right.inverse()
    checked = 0
    for x in _probe_trees(bound, max_bound):
        for g1 in enumerate_embeddings(x, t1, kind, max_nodes=bound):
            g2 = {}
            for v in x.nodes:
                w = inv2.get(c.left(g1(v)))
                if w is None:
                    break
                g2[v] = w
            else:
                if not is_embedding(x, c.right.source, g2, kind):
                    continue
                probe = Probe(x, dict(g1.mapping), g2)
                checked += 1
                mode, maps, good = _pullback_outcome(c, p, probe)
                if mode is not None:
                    return UniversalReport(
                        Verdict.COUNTEREXAMPLE, bound, kind, checked, Counterexample(probe, mode, maps, good)
                    )
    return UniversalReport(Verdict.VERIFIED, bound, kind, checked)


def replay_pullback(c: CospanResult, candidate, probe: Probe) -> FailureMode | None:
    """Re-run the mediator analysis on a recorded probe."""
    p = _as_span(candidate)
    _check_cone(c, p)
    for m, tgt in ((probe.first, c.left.source), (probe.second, c.right.source)):
        if not is_embedding(probe.tree, tgt, m, c.kind):
            raise PreconditionViolation("probe maps are not embeddings of the cospan's kind")
    for v in probe.tree.nodes:
        if c.left(probe.first[v]) != c.right(probe.second[v]):
            raise PreconditionViolation("probe does not commute")
    return _pullback_outcome(c, p, probe)[0]


# -- pushouts ----------------------------------------------------------------


def _as_cospan(candidate) -> CospanResult:
    if isinstance(candidate, SumResult):
        return candidate.cospan
    if isinstance(candidate, CospanResult):
        return candidate
    raise InvalidCospan("pushout candidate must be a CospanResult or SumResult")


def _check_cocone(s: SpanResult, p: CospanResult) -> None:
    if p.left.source != s.left.target or p.right.source != s.right.target:
        raise InvalidCospan("candidate legs do not start at the span's sides")
    if p.kind < s.kind:
        raise PreconditionViolation(f"candidate legs are {p.kind.short}, span is {s.kind.short}")
    for v in s.apex.nodes:
        if p.left(s.left(v)) != p.right(s.right(v)):
            raise InvalidCospan(f"candidate does not commute at {v!r}")


def _pushout_outcome(s: SpanResult, p: CospanResult, probe: Probe):
    wanted: dict[NodeId, set[NodeId]] = {v: set() for v in p.apex.nodes}
    for a, v in p.left.mapping.items():
        wanted[v].add(probe.first[a])
    for b, v in p.right.mapping.items():
        wanted[v].add(probe.second[b])
    everything = list(probe.tree.nodes)
    options = []
    for v in p.apex.nodes:
        w = wanted[v]
        options.append(everything if not w else sorted(w) if len(w) == 1 else [])
    return _judge(p.apex, probe.tree, options, s.kind)


def check_pushout(s: SpanResult, candidate, bound: int, max_bound: int = DEFAULT_MAX_BOUND) -> UniversalReport:
    """Check that ``candidate`` is a pushout of ``s`` against every probe with at most ``bound`` nodes."""
    if not isinstance(s, SpanResult):
        raise InvalidSpan("expected a SpanResult")
    p = _as_cospan(candidate)
    _check_cocone(s, p)
    kind = s.kind
    t1, t2 = s.left.target, s.right.target
    checked = 0
    for x in _probe_trees(bound, max_bound):
        if len(x) < max(len(t1), len(t2)):
            continue
        for h1 in enumerate_embeddings(t1, x, kind, max_nodes=len(t1)):
            fixed = {s.right(c): h1(s.left(c)) for c in s.apex.nodes}
            for h2 in enumerate_embeddings(t2, x, kind, max_nodes=len(t2), fixed=fixed):
                probe = Probe(x, dict(h1.mapping), dict(h2.mapping))
                checked += 1
                mode, maps, good = _pushout_outcome(s, p, probe)
                if mode is not None:
                    return UniversalReport(
                        Verdict.COUNTEREXAMPLE, bound, kind, checked, Counterexample(probe, mode, maps, good)
                    )
    return UniversalReport(Verdict.VERIFIED, bound, kind, checked)


def replay_pushout(s: SpanResult, candidate, probe: Probe) -> FailureMode | None:
    p = _as_cospan(candidate)
    _check_cocone(s, p)
    for m, src in ((probe.first, s.left.target), (probe.second, s.right.target)):
        if not is_embedding(src, probe.tree, m, s.kind):
            raise PreconditionViolation("probe maps are not embeddings of the span's kind")
    for c in s.apex.nodes:
        if probe.first[s.left(c)] != probe.second[s.right(c)]:
            raise PreconditionViolation("probe does not commute")
    return _pushout_outcome(s, p, probe)[0]
