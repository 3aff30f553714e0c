"""Seeded randomized property suites, shared by the ``proptest`` command and the test-suite.

Each suite returns a :class:`SuiteResult` counting instances and collecting a
description of every violation.  Oracles here are deliberately naive (all
injective maps, all node pairs, reachability by search) so that they do not
share code paths with the constructions they check.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .category import check_pullback, check_pushout
from .embeddings import ALL_KINDS, EmbeddingKind, enumerate_embeddings, verify_embedding
from .errors import TreespanError
from .generators import random_cospan, random_embedding, random_tree
from .pullback import Shape, intersection
from .pushout import join, prune_subsumed_arcs, subsumed_arcs, tree_sum
from .solvers import SolveConfig, lcst_bruteforce, scst_bruteforce, sub_to_super, super_to_sub
from .tree import RootedTree, least_common_ancestor, path_between, trees_isomorphic

STRICT_KINDS = (EmbeddingKind.ISOMORPHIC, EmbeddingKind.HOMEOMORPHIC, EmbeddingKind.TOPOLOGICAL)


@dataclass
class SuiteResult:
    name: str
    instances: int = 0
    failures: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        if len(self.failures) < 20:
            self.failures.append(message)
        else:
            self.failures[-1] = f"{message} (and more)"

    def __str__(self) -> str:
        status = "ok" if self.ok else f"{len(self.failures)} violation(s)"
        return f"{self.name}: {self.instances} instances, {status}, {self.elapsed:.2f}s"


def _timed(name: str):
    def wrap(fn: Callable[..., None]):
        def run(*args, **kwargs) -> SuiteResult:
            res = SuiteResult(name)
            start = time.perf_counter()
            fn(res, *args, **kwargs)
            res.elapsed = time.perf_counter() - start
            return res

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


@_timed("hierarchy")
def hierarchy(res: SuiteResult, seed: int, min_maps: int = 10_000, max_nodes: int = 6) -> None:
    """Every injective map between random trees: verifying at a kind implies every weaker kind."""
    rng = random.Random(seed)
    while res.instances < min_maps:
        t = random_tree(rng.randint(1, max_nodes), rng, "t")
        s = random_tree(rng.randint(1, len(t)), rng, "s")
        for images in itertools.permutations(t.nodes, len(s)):
            m = dict(zip(s.nodes, images))
            ok = {k: bool(verify_embedding(s, t, m, k)) for k in EmbeddingKind}
            res.instances += 1
            for k in EmbeddingKind:
                if ok[k] and not all(ok[w] for w in EmbeddingKind if w < k):
                    res.fail(f"{m} verifies at {k.short} but not at a weaker kind; {s!r} -> {t!r}")


@_timed("path-lifting")
def path_lifting(res: SuiteResult, seed: int, count: int = 1000, max_nodes: int = 7) -> None:
    """Paths exist in the source iff they exist between images; elementary and arc paths lift."""
    rng = random.Random(seed)
    for _ in range(count):
        f = random_embedding(rng, rng.choice(ALL_KINDS), max_nodes)
        s, t = f.source, f.target
        res.instances += 1
        for a, b in itertools.permutations(s.nodes, 2):
            ps, pt = path_between(s, a, b), path_between(t, f(a), f(b))
            if (ps is None) != (pt is None):
                res.fail(f"path {a}~>{b} exists in one tree only under {f!r}")
                continue
            if pt is None:
                continue
            if all(t.out_degree(v) == 1 for v in pt[1:-1]) and not all(s.out_degree(v) == 1 for v in ps[1:-1]):
                res.fail(f"elementary image path {pt} over non-elementary {ps}")
            if len(pt) == 2 and len(ps) != 2:
                res.fail(f"image arc {pt} over non-arc path {ps}")


@_timed("lca-preservation")
def lca_preservation(res: SuiteResult, seed: int, count: int = 1000, max_nodes: int = 7) -> None:
    """Topological (and stronger) embeddings map least common ancestors to least common ancestors."""
    rng = random.Random(seed)
    for _ in range(count):
        f = random_embedding(rng, rng.choice(STRICT_KINDS), max_nodes)
        s, t = f.source, f.target
        res.instances += 1
        for a, b in itertools.combinations(s.nodes, 2):
            if s.is_ancestor(a, b) or s.is_ancestor(b, a):
                continue
            if f(least_common_ancestor(s, a, b)) != least_common_ancestor(t, f(a), f(b)):
                res.fail(f"lca of {a},{b} not preserved by {f!r}")


def _arc_for_arc(s: RootedTree, t: RootedTree, m) -> bool:
    return {(m[a], m[b]) for a, b in s.arcs} == set(t.arcs)


@_timed("bijective-minor")
def bijective_minor(res: SuiteResult, seed: int, count: int = 1000, max_nodes: int = 6) -> None:
    """Bijective minor embeddings are isomorphisms."""
    rng = random.Random(seed)
    while res.instances < count:
        t = random_tree(rng.randint(1, max_nodes), rng, "t")
        if rng.random() < 0.5:
            labels = [f"s{i}" for i in range(len(t))]
            rng.shuffle(labels)
            s = t.relabel(dict(zip(t.nodes, labels)))
        else:
            s = random_tree(len(t), rng, "s")
        maps = enumerate_embeddings(s, t, EmbeddingKind.MINOR, max_nodes=max_nodes)
        images = list(t.nodes)
        rng.shuffle(images)
        blind = dict(zip(s.nodes, images))
        if verify_embedding(s, t, blind, EmbeddingKind.MINOR):
            maps.append(blind)
        for f in maps:
            m = dict(f.mapping) if hasattr(f, "mapping") else f
            res.instances += 1
            if not trees_isomorphic(s, t) or not _arc_for_arc(s, t, m):
                res.fail(f"bijective minor embedding {m} is not an isomorphism")


def _declared_intersection_arcs(c, names) -> set:
    """Arcs by definition: paths a~>b in both sides with no common-image intermediate."""
    t1, t2 = c.left.source, c.right.source
    inv2 = c.right.inverse()
    common = {a for a in t1.nodes if c.left(a) in inv2}
    arcs = set()
    for a, b in itertools.permutations(common, 2):
        p1 = path_between(t1, a, b)
        p2 = path_between(t2, inv2[c.left(a)], inv2[c.left(b)])
        if p1 is None or p2 is None:
            continue
        if any(v in common for v in p1[1:-1]):
            continue
        if any(c.right(v) in {c.left(x) for x in common} for v in p2[1:-1]):
            continue
        arcs.add((names[a], names[b]))
    return arcs


@_timed("intersection")
def intersection_suite(res: SuiteResult, seed: int, count: int = 500, max_nodes: int = 7) -> None:
    """Intersections of iso/homeo/topo cospans are trees with inclusions of the same kind."""
    rng = random.Random(seed)
    for i in range(count):
        kind = STRICT_KINDS[i % 3]
        c = random_cospan(rng, kind, max_nodes)
        r = intersection(c)
        res.instances += 1
        if r.shape is not Shape.TREE:
            res.fail(f"{kind.short} cospan gave a forest")
            continue
        for inc in (r.left_inclusion, r.right_inclusion):
            if not verify_embedding(inc.source, inc.target, inc.mapping, kind):
                res.fail(f"inclusion does not verify at {kind.short}")
        expected_nodes = c.left.image & c.right.image
        if {c.left(r.left_inclusion(v)) for v in r.tree.nodes} != set(expected_nodes):
            res.fail("node set is not the intersection of the images")
        for v in r.tree.nodes:
            if c.left(r.left_inclusion(v)) != c.right(r.right_inclusion(v)):
                res.fail(f"square does not commute at {v}")
        if set(r.graph_arcs) != _declared_intersection_arcs(c, {a: a for a in c.left.source.nodes}):
            res.fail(f"arc set differs from the path definition for {kind.short} cospan")


def _solve_pair(kind, t1, t2, res: SuiteResult) -> None:
    cfg = SolveConfig(kind=kind, max_nodes=8)
    lo = lcst_bruteforce(t1, t2, cfg)
    hi = scst_bruteforce(t1, t2, cfg)
    n1, n2 = len(t1), len(t2)
    tag = f"{kind.short} {t1!r} / {t2!r}"
    up = sub_to_super(lo)
    if len(up.apex) != len(hi.apex):
        res.fail(f"sum of a largest common subtree has {len(up.apex)} nodes, optimum {len(hi.apex)}: {tag}")
    if len(up.apex) != n1 + n2 - len(lo.apex):
        res.fail(f"size law broken: {tag}")
    down = super_to_sub(hi)
    if len(down.apex) != len(lo.apex):
        res.fail(f"shared part of a smallest supertree has {len(down.apex)} nodes, optimum {len(lo.apex)}: {tag}")
    if not trees_isomorphic(super_to_sub(up).apex, lo.apex):
        res.fail(f"subtree round trip changed the apex: {tag}")
    if not trees_isomorphic(sub_to_super(down).apex, hi.apex):
        res.fail(f"supertree round trip changed the apex: {tag}")
    for e in (up.left, up.right, down.left, down.right):
        if not verify_embedding(e.source, e.target, e.mapping, kind):
            res.fail(f"conversion output fails {kind.short}: {tag}")


@_timed("duality")
def duality(res: SuiteResult, seed: int, pairs: int = 200, max_nodes: int = 6, kinds=ALL_KINDS) -> None:
    """Conversions between optima agree with the brute-force optima, and round-trip."""
    rng = random.Random(seed)
    for kind in kinds:
        for _ in range(pairs):
            t1 = random_tree(rng.randint(1, max_nodes), rng, "a")
            t2 = random_tree(rng.randint(1, max_nodes), rng, "b")
            res.instances += 1
            try:
                _solve_pair(kind, t1, t2, res)
            except TreespanError as exc:
                res.fail(f"{kind.short} {t1!r} / {t2!r}: {type(exc).__name__}: {exc}")


@_timed("universal")
def universal(res: SuiteResult, seed: int, count: int = 100, bound: int = 5) -> None:
    """Constructed pullbacks and pushouts survive every probe up to ``bound`` nodes."""
    rng = random.Random(seed)
    for i in range(count):
        kind = STRICT_KINDS[i % 3]
        c = random_cospan(rng, kind, max_nodes=6)
        rep = check_pullback(c, intersection(c), bound)
        res.instances += 1
        if not rep.ok:
            res.fail(f"pullback refuted: {rep}")
    for i in range(count):
        kind = ALL_KINDS[i % 4]
        t1 = random_tree(rng.randint(1, 4), rng, "a")
        t2 = random_tree(rng.randint(1, 4), rng, "b")
        span = lcst_bruteforce(t1, t2, SolveConfig(kind=kind, max_nodes=8))
        rep = check_pushout(span, tree_sum(span), bound)
        res.instances += 1
        if not rep.ok:
            res.fail(f"pushout refuted: {rep}")


@_timed("order-independence")
def order_independence(res: SuiteResult, seed: int, count: int = 50, perms: int = 20, max_nodes: int = 6) -> None:
    """Pruning removes the same arcs whatever order the scan visits classes in."""
    rng = random.Random(seed)
    for i in range(count):
        kind = ALL_KINDS[i % 4]
        t1 = random_tree(rng.randint(1, max_nodes), rng, "a")
        t2 = random_tree(rng.randint(1, max_nodes), rng, "b")
        q = join(lcst_bruteforce(t1, t2, SolveConfig(kind=kind, max_nodes=8)))
        base = prune_subsumed_arcs(q)
        res.instances += 1
        if base.removed != subsumed_arcs(q):
            res.fail(f"scan disagrees with the declarative definition ({kind.short})")
        for _ in range(perms):
            other = prune_subsumed_arcs(q, order=random.Random(rng.random()))
            if other.arcs != base.arcs:
                res.fail(f"removal order changed the result ({kind.short})")


SUITES = {
    "hierarchy": hierarchy,
    "path-lifting": path_lifting,
    "lca-preservation": lca_preservation,
    "bijective-minor": bijective_minor,
    "intersection": intersection_suite,
    "duality": duality,
    "universal": universal,
    "order-independence": order_independence,
}

QUICK = {
    "hierarchy": {"min_maps": 2000},
    "path-lifting": {"count": 200},
    "lca-preservation": {"count": 200},
    "bijective-minor": {"count": 200},
    "intersection": {"count": 100},
    "duality": {"pairs": 10},
    "universal": {"count": 10},
    "order-independence": {"count": 10},
}


def run_all(seed: int, quick: bool = True) -> list[SuiteResult]:
    return [fn(seed, **(QUICK[name] if quick else {})) for name, fn in SUITES.items()]
