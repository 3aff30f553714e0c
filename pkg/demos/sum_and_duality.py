"""Glue two trees along their largest common subtree and convert back again."""

from treespan import EmbeddingKind, RootedTree, SolveConfig, lcst_bruteforce, scst_bruteforce, tree_sum
from treespan.solvers import sub_to_super, super_to_sub

t1 = RootedTree.from_arcs([("r", "x"), ("r", "y"), ("y", "z")])
t2 = RootedTree.from_arcs([("s", "m"), ("m", "p"), ("p", "q"), ("p", "w")])

for kind in (EmbeddingKind.ISOMORPHIC, EmbeddingKind.MINOR):
    cfg = SolveConfig(kind=kind)
    lo = lcst_bruteforce(t1, t2, cfg)
    hi = scst_bruteforce(t1, t2, cfg)
    s = tree_sum(lo)
    print(f"== {kind.name.lower()}")
    print("largest common subtree:", lo.apex)
    print("sum:", s.tree)
    for name in s.tree.nodes:
        print(f"  {name:<6} <- {s.quotient.provenance(name)}")
    print("removed arcs:", sorted(s.removed))
    print("sizes: subtree", len(lo.apex), "sum", len(s.tree), "exhaustive supertree", len(hi.apex))
    print("shared part of the supertree:", len(super_to_sub(hi).apex), "nodes")
    print("round trip:", len(super_to_sub(sub_to_super(lo)).apex), "nodes")
