import random

import pytest

from treespan import CospanResult, Embedding, RootedTree, SpanResult, intersection, tree_sum
from treespan.category import (
    FailureMode,
    Verdict,
    check_pullback,
    check_pushout,
    replay_pullback,
    replay_pushout,
)
from treespan.errors import BoundExceeded, InvalidCospan, InvalidSpan
from treespan.generators import random_cospan
from treespan.pullback import Shape
from treespan.solvers import SolveConfig, lcst_bruteforce

from .conftest import F, K, ident, tree


@pytest.fixture
def forked_cospan(forked):
    big, left, right = forked
    return CospanResult(big, ident(left, big, K.MINOR), ident(right, big, K.MINOR))


def leaf_span(c, label):
    one = RootedTree.single("q")
    return SpanResult(one, Embedding(one, c.left.source, {"q": label}, K.MINOR), Embedding(one, c.right.source, {"q": label}, K.MINOR))


@pytest.fixture
def singletons():
    e, p, q = RootedTree.empty(), RootedTree.single("p"), RootedTree.single("q")
    return SpanResult(e, Embedding(e, p, {}, K.ISOMORPHIC), Embedding(e, q, {}, K.ISOMORPHIC))


def rename_span(p, prefix):
    new = {v: f"{prefix}{v}" for v in p.apex.nodes}
    apex = p.apex.relabel(new)
    back = {w: v for v, w in new.items()}
    return SpanResult(
        apex,
        Embedding(apex, p.left.target, {w: p.left(back[w]) for w in apex.nodes}, p.kind),
        Embedding(apex, p.right.target, {w: p.right(back[w]) for w in apex.nodes}, p.kind),
    )


class TestForkedPullback:
    def test_empty_candidate(self, forked_cospan):
        c = forked_cospan
        e = RootedTree.empty()
        cand = SpanResult(e, Embedding(e, c.left.source, {}, K.MINOR), Embedding(e, c.right.source, {}, K.MINOR))
        rep = check_pullback(c, cand, bound=3)
        assert rep.verdict is Verdict.COUNTEREXAMPLE
        assert rep.counterexample.mode is FailureMode.NO_MEDIATOR
        assert len(rep.counterexample.probe.tree) == 1
        assert replay_pullback(c, cand, rep.counterexample.probe) is FailureMode.NO_MEDIATOR

    @pytest.mark.parametrize("kept, missed", [("b", "c"), ("c", "b")])
    def test_one_leaf_candidate(self, forked_cospan, kept, missed):
        rep = check_pullback(forked_cospan, leaf_span(forked_cospan, kept), bound=3)
        assert rep.counterexample.mode is FailureMode.NO_MEDIATOR
        assert list(rep.counterexample.probe.first.values()) == [missed]

    def test_forest_intersection_cannot_be_used(self, forked_cospan):
        r = intersection(forked_cospan)
        assert r.shape is Shape.FOREST
        # the extended tree does not commute at the fresh root
        with pytest.raises(InvalidSpan):
            check_pullback(forked_cospan, r, bound=2)


class TestSingletonPushout:
    def test_one_node_candidate(self, singletons):
        z = RootedTree.single("z")
        cand = CospanResult(z, Embedding(singletons.left.target, z, {"p": "z"}, K.ISOMORPHIC),
                            Embedding(singletons.right.target, z, {"q": "z"}, K.ISOMORPHIC))
        rep = check_pushout(singletons, cand, bound=3)
        assert rep.verdict is Verdict.COUNTEREXAMPLE
        assert rep.counterexample.mode is FailureMode.NO_MEDIATOR
        assert len(rep.counterexample.probe.tree) == 2

    def test_two_node_candidate(self, singletons):
        z = tree(("z1", "z2"))
        cand = CospanResult(z, Embedding(singletons.left.target, z, {"p": "z1"}, K.ISOMORPHIC),
                            Embedding(singletons.right.target, z, {"q": "z2"}, K.ISOMORPHIC))
        rep = check_pushout(singletons, cand, bound=3)
        assert rep.verdict is Verdict.COUNTEREXAMPLE
        assert rep.counterexample.mode is FailureMode.NOT_EMBEDDING
        assert len(rep.counterexample.probe.tree) == 1
        assert replay_pushout(singletons, cand, rep.counterexample.probe) is FailureMode.NOT_EMBEDDING
        assert "NotEmbedding" in str(rep)


class TestConstructedCandidates:
    @pytest.mark.parametrize("kind", [K.ISOMORPHIC, K.HOMEOMORPHIC, K.TOPOLOGICAL])
    def test_pullbacks_verify(self, kind):
        rng = random.Random(kind.value)
        for _ in range(15):
            c = random_cospan(rng, kind, 6)
            rep = check_pullback(c, intersection(c), bound=4)
            assert rep.ok, str(rep)
            assert rep.probes_checked >= 1

    def test_minor_tree_pullbacks_verify(self):
        rng = random.Random(11)
        seen = 0
        while seen < 10:
            c = random_cospan(rng, K.MINOR, 6)
            r = intersection(c)
            if r.shape is Shape.TREE:
                assert check_pullback(c, r, bound=4).ok
                seen += 1

    @pytest.mark.parametrize("kind", [K.ISOMORPHIC, K.HOMEOMORPHIC, K.TOPOLOGICAL])
    def test_pushouts_verify(self, kind):
        rng = random.Random(kind.value)
        from treespan.generators import random_tree

        total = 0
        for _ in range(10):
            a = random_tree(rng.randint(1, 4), rng, "a")
            b = random_tree(rng.randint(1, 4), rng, "b")
            s = lcst_bruteforce(a, b, SolveConfig(kind=kind))
            rep = check_pushout(s, tree_sum(s), bound=5)
            assert rep.ok, str(rep)
            total += rep.probes_checked
        assert total > 100

    def test_minor_pushout_refuted(self):
        t1 = tree(("a0", "a1"), ("a0", "a2"))
        t2 = tree(("b1", "b2"), ("b2", "b0"))
        s = lcst_bruteforce(t1, t2, SolveConfig(kind=K.MINOR))
        rep = check_pushout(s, tree_sum(s), bound=4)
        assert rep.counterexample.mode is FailureMode.NOT_EMBEDDING
        assert replay_pushout(s, tree_sum(s), rep.counterexample.probe) is FailureMode.NOT_EMBEDDING

    def test_isomorphism_stability(self):
        rng = random.Random(2)
        for _ in range(10):
            c = random_cospan(rng, K.TOPOLOGICAL, 6)
            p = intersection(c).as_span()
            assert check_pullback(c, p, 4).verdict is check_pullback(c, rename_span(p, "w"), 4).verdict
        e = RootedTree.empty()
        c = random_cospan(random.Random(0), K.MINOR, 6)
        small = SpanResult(e, Embedding(e, c.left.source, {}, K.MINOR), Embedding(e, c.right.source, {}, K.MINOR))
        assert check_pullback(c, small, 3).verdict is check_pullback(c, rename_span(small, "w"), 3).verdict


class TestGuards:
    def test_bound(self, S, T):
        c = CospanResult(T, Embedding(S, T, F[4], K.ISOMORPHIC), Embedding(S, T, F[4], K.ISOMORPHIC))
        with pytest.raises(BoundExceeded):
            check_pullback(c, intersection(c), bound=7)
        assert check_pullback(c, intersection(c), bound=7, max_bound=7).ok
        with pytest.raises(ValueError):
            check_pullback(c, intersection(c), bound=-1)

    def test_bad_candidates(self, S, T):
        f4 = Embedding(S, T, F[4], K.ISOMORPHIC)
        c = CospanResult(T, f4, f4)
        with pytest.raises(InvalidSpan):
            check_pullback(c, "nope", 2)
        swap = Embedding(S, S, {"r": "r", "x": "y", "y": "x"}, K.ISOMORPHIC)
        with pytest.raises(InvalidSpan):
            check_pullback(c, SpanResult(S, ident(S, S, K.ISOMORPHIC), swap), 2)
        s = SpanResult(S, ident(S, S, K.ISOMORPHIC), f4)
        with pytest.raises(InvalidCospan):
            check_pushout(s, "nope", 2)
        wrong = CospanResult(T, Embedding(S, T, F[5], K.ISOMORPHIC), ident(T, T, K.ISOMORPHIC))
        with pytest.raises(InvalidCospan):
            check_pushout(s, wrong, 2)
