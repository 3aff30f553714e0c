"""Where the minor kind breaks: a sum that is not a pushout, and one that is not a tree."""

from treespan import Embedding, EmbeddingKind, RootedTree, SolveConfig, SpanResult, lcst_bruteforce, tree_sum
from treespan.category import check_pushout
from treespan.errors import NotATreeAfterPruning

K = EmbeddingKind.MINOR

# a fork and a path: the sum exists but some cocone has no mediating embedding
t1 = RootedTree.from_arcs([("a0", "a1"), ("a0", "a2")])
t2 = RootedTree.from_arcs([("b1", "b2"), ("b2", "b0")])
s = lcst_bruteforce(t1, t2, SolveConfig(kind=K))
sigma = tree_sum(s)
print("sum:", sigma.tree)
print(check_pushout(s, sigma, bound=4))

# a largest common subtree whose glued graph keeps a node with two parents
t1 = RootedTree.from_arcs([("a5", "a3"), ("a3", "a1"), ("a1", "a0"), ("a5", "a4"), ("a4", "a2")])
t2 = RootedTree.from_arcs([("b4", "b3"), ("b3", "b0"), ("b3", "b1"), ("b3", "b2"), ("b0", "b5")])
apex = RootedTree.from_arcs([("a5", "a0"), ("a5", "a4"), ("a4", "a2")])
span = SpanResult(apex, Embedding(apex, t1, {v: v for v in apex.nodes}, K),
                  Embedding(apex, t2, {"a0": "b1", "a2": "b5", "a4": "b0", "a5": "b4"}, K))
try:
    tree_sum(span)
except NotATreeAfterPruning as exc:
    print("\nsum fails:", exc)
