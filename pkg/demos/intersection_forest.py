"""Two forks that are minors of a common tree intersect in a forest."""

from pathlib import Path

from treespan import CospanResult, Embedding, EmbeddingKind, RootedTree, SpanResult, intersection, parse_mapping, parse_tree
from treespan.category import check_pullback

DATA = Path(__file__).resolve().parent / "data"
K = EmbeddingKind.MINOR


def load(name):
    return parse_tree((DATA / name).read_text())


big, u1, u2 = load("U.tree"), load("U1.tree"), load("U2.tree")
c = CospanResult(big, Embedding(u1, big, parse_mapping((DATA / "u1.map").read_text()), K),
                 Embedding(u2, big, parse_mapping((DATA / "u2.map").read_text()), K))
r = intersection(c)
print("shape:", r.shape.value)
print("nodes:", r.graph_nodes, "arcs:", sorted(r.graph_arcs))
print("completed tree:", r.tree)

# neither obvious tree candidate satisfies the universal property
e = RootedTree.empty()
empty = SpanResult(e, Embedding(e, u1, {}, K), Embedding(e, u2, {}, K))
print("\nempty candidate:", check_pullback(c, empty, bound=3))
one = RootedTree.single("q")
leaf = SpanResult(one, Embedding(one, u1, {"q": "b"}, K), Embedding(one, u2, {"q": "b"}, K))
print("\none-leaf candidate:", check_pullback(c, leaf, bound=3))
