"""Command-line interface.

Exit codes: 0 success (or a true verdict), 1 a false verdict, 2 usage error,
3 bad input, 4 broken internal invariant.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .category import check_pullback, check_pushout
from .embeddings import Embedding, EmbeddingKind, classify_embedding, verify_embedding
from .errors import InternalInvariantError, TreespanError
from .io import export_dot, export_dot_graph, parse_mapping, parse_tree, serialize_mapping, serialize_tree
from .proptest import run_all
from .pullback import CospanResult, Shape, intersection
from .pushout import SpanResult, SumResult, join, prune_subsumed_arcs, tree_sum
from .solvers import SolveConfig, lcst_bruteforce, scst_bruteforce, sub_to_super, super_to_sub
from .tree import NodeId, RootedTree

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = range(5)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _tree(path: str) -> RootedTree:
    return parse_tree(_read(path))


def _map(path: str) -> dict[NodeId, NodeId]:
    return parse_mapping(_read(path))


def _kind(text: str) -> EmbeddingKind:
    try:
        return EmbeddingKind.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- output -------------------------------------------------------------------


class Output:
    """Collects the printed text and the optional files written by a command."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.rename: dict[NodeId, NodeId] = {}

    def plain(self, nodes: Sequence[NodeId]) -> None:
        """Drop ``1:``/``2:`` tags from node names where that causes no clash."""
        if not self.args.plain:
            return
        names = set(nodes)
        for v in sorted(nodes):
            if v[:2] in ("1:", "2:") and v[2:] not in names:
                names.discard(v)
                names.add(v[2:])
                self.rename[v] = v[2:]

    def n(self, v: NodeId) -> NodeId:
        return self.rename.get(v, v)

    def tree(self, t: RootedTree) -> RootedTree:
        return t.relabel({v: self.n(v) for v in t.nodes}) if self.rename else t

    def emit_result(self, title: str, t: RootedTree, left, right, *, into_apex: bool, marks=None) -> None:
        """Print ``t`` and the two maps; ``into_apex`` says the maps point at ``t``."""
        t_out = self.tree(t)
        maps = {}
        for tag, e in (("left", left), ("right", right)):
            m = e.mapping
            maps[tag] = {k: self.n(v) for k, v in m.items()} if into_apex else {self.n(k): v for k, v in m.items()}
        arrow = "T{} -> apex" if into_apex else "apex -> T{}"
        print(f"# {title} ({len(t_out)} nodes)")
        sys.stdout.write(serialize_tree(t_out))
        for i, (tag, m) in enumerate(maps.items(), start=1):
            print(f"# {tag}: {arrow.format(i)}")
            sys.stdout.write(serialize_mapping(m))
        if self.args.out:
            prefix = self.args.out
            Path(f"{prefix}.tree").write_text(serialize_tree(t_out), encoding="utf-8")
            for tag, m in maps.items():
                Path(f"{prefix}.{tag}.map").write_text(serialize_mapping(m), encoding="utf-8")
        if self.args.dot:
            marks = {self.n(k): v for k, v in (marks or {}).items()}
            Path(self.args.dot).write_text(export_dot(t_out, marks), encoding="utf-8")


def _merged_marks(res: SumResult) -> dict[NodeId, str]:
    q = res.quotient
    return {v: q.provenance(v) for v in q.merged}


# -- commands -------------------------------------------------------------------


def cmd_verify(args) -> int:
    s, t, m = _tree(args.source), _tree(args.target), _map(args.mapping)
    kind = args.kind
    res = verify_embedding(s, t, m, kind)
    parts = [f"{kind.short}: {'yes' if res else 'no'}"]
    if res and kind.stronger() is not None:
        up = kind.stronger()
        parts.append(f"{up.short}: {'yes' if verify_embedding(s, t, m, up) else 'no'}")
    print("; ".join(parts))
    if not res:
        print(f"violation: {res.violation}")
    return EXIT_OK if res else EXIT_FALSE


def cmd_classify(args) -> int:
    k = classify_embedding(_tree(args.source), _tree(args.target), _map(args.mapping))
    print(k.short if k is not None else "none")
    return EXIT_OK if k is not None else EXIT_FALSE


def _cospan(args) -> CospanResult:
    t1, t2, t = _tree(args.t1), _tree(args.t2), _tree(args.t)
    return CospanResult(t, Embedding(t1, t, _map(args.f1), args.kind), Embedding(t2, t, _map(args.f2), args.kind))


def _span(args) -> SpanResult:
    t1, t2, mu = _tree(args.t1), _tree(args.t2), _tree(args.mu)
    return SpanResult(mu, Embedding(mu, t1, _map(args.m1), args.kind), Embedding(mu, t2, _map(args.m2), args.kind))


def cmd_intersect(args) -> int:
    r = intersection(_cospan(args))
    print(f"# shape: {r.shape.value}")
    if r.shape is Shape.FOREST:
        print(f"# parentless nodes: {' '.join(r.parentless)}; extended with fresh root {r.fresh_root}")
    out = Output(args)
    out.emit_result("intersection", r.tree, r.left_inclusion, r.right_inclusion, into_apex=False)
    return EXIT_OK


def cmd_join(args) -> int:
    q = join(_span(args), debug=args.debug_oracle)
    out = Output(args)
    out.plain(q.nodes)
    removed = prune_subsumed_arcs(q, debug=args.debug_oracle).removed
    for name in q.nodes:
        members = " ".join(f"{side}:{label}" for side, label in q.classes[name])
        print(f"# class {out.n(name)} = {members}")
    for a, b in sorted(q.arcs):
        note = "  # subsumed" if (a, b) in removed else ""
        print(f"arc {out.n(a)} {out.n(b)}{note}")
    if args.dot:
        marks = {out.n(v): q.provenance(v) for v in q.merged}
        nodes = [out.n(v) for v in q.nodes]
        arcs = [(out.n(a), out.n(b)) for a, b in q.arcs]
        Path(args.dot).write_text(export_dot_graph(nodes, arcs, marks, name="join"), encoding="utf-8")
    return EXIT_OK


def _emit_sum(args, res: SumResult, title: str) -> int:
    out = Output(args)
    out.plain(res.tree.nodes)
    for a, b in sorted(res.removed):
        print(f"# removed subsumed arc {out.n(a)} {out.n(b)}")
    out.emit_result(title, res.tree, res.left, res.right, into_apex=True, marks=_merged_marks(res))
    return EXIT_OK


def cmd_sum(args) -> int:
    return _emit_sum(args, tree_sum(_span(args), debug=args.debug_oracle), "sum")


def cmd_sub2super(args) -> int:
    span = _span(args)
    sub_to_super(span, debug=args.debug_oracle)  # validates and cross-checks
    return _emit_sum(args, tree_sum(span), "smallest common supertree")


def cmd_super2sub(args) -> int:
    res = super_to_sub(_cospan(args), debug=args.debug_oracle)
    Output(args).emit_result("largest common subtree", res.apex, res.left, res.right, into_apex=False)
    return EXIT_OK


def _config(args) -> SolveConfig:
    return SolveConfig(kind=args.kind) if args.max_nodes is None else SolveConfig(args.kind, args.max_nodes)


def cmd_lcst(args) -> int:
    res = lcst_bruteforce(_tree(args.t1), _tree(args.t2), _config(args))
    Output(args).emit_result("largest common subtree", res.apex, res.left, res.right, into_apex=False)
    return EXIT_OK


def cmd_scst(args) -> int:
    res = scst_bruteforce(_tree(args.t1), _tree(args.t2), _config(args))
    Output(args).emit_result("smallest common supertree", res.apex, res.left, res.right, into_apex=True)
    return EXIT_OK


def _candidate_files(args):
    if not args.candidate:
        return None
    p, g1, g2 = args.candidate
    return _tree(p), _map(g1), _map(g2)


def cmd_check_pullback(args) -> int:
    c = _cospan(args)
    given = _candidate_files(args)
    if given is None:
        r = intersection(c)
        if r.shape is Shape.FOREST:
            print("# intersection is a forest; testing the empty tree as candidate")
            empty = RootedTree.empty()
            cand = SpanResult(empty, Embedding(empty, c.left.source, {}, c.kind), Embedding(empty, c.right.source, {}, c.kind))
        else:
            cand = r
    else:
        p, g1, g2 = given
        cand = SpanResult(p, Embedding(p, c.left.source, g1, c.kind), Embedding(p, c.right.source, g2, c.kind))
    print(check_pullback(c, cand, args.bound))
    return EXIT_OK


def cmd_check_pushout(args) -> int:
    s = _span(args)
    given = _candidate_files(args)
    if given is None:
        cand = tree_sum(s, debug=args.debug_oracle)
    else:
        p, g1, g2 = given
        cand = CospanResult(p, Embedding(s.left.target, p, g1, s.kind), Embedding(s.right.target, p, g2, s.kind))
    print(check_pushout(s, cand, args.bound))
    return EXIT_OK


def cmd_proptest(args) -> int:
    results = run_all(args.seed, quick=not args.full)
    for r in results:
        print(r)
        for f in r.failures[: args.show]:
            print(f"    {f}")
    return EXIT_OK if all(r.ok for r in results) else EXIT_FALSE


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--kind", type=_kind, default=EmbeddingKind.MINOR,
                        help="iso, hom, top or min (default: min)")
    common.add_argument("--dot", metavar="PATH", help="also write the produced tree as DOT")
    common.add_argument("--out", metavar="PREFIX", help="write PREFIX.tree and PREFIX.{left,right}.map")
    common.add_argument("--debug-oracle", action="store_true", help="cross-check with brute-force oracles")
    common.add_argument("--plain", action="store_true", help="strip 1:/2: origin tags where unambiguous")

    parser = argparse.ArgumentParser(prog="treespan", description="Embeddings, intersections and sums of rooted trees.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name: str, fn: Callable, help: str, *positionals: str):
        p = sub.add_parser(name, parents=[common], help=help, description=help)
        for pos in positionals:
            p.add_argument(pos)
        p.set_defaults(func=fn)
        return p

    add("verify", cmd_verify, "check a mapping against an embedding kind", "source", "target", "mapping")
    add("classify", cmd_classify, "strongest kind a mapping satisfies", "source", "target", "mapping")
    cospan_args = ("t1", "t2", "f1", "f2", "t")
    span_args = ("t1", "t2", "mu", "m1", "m2")
    add("intersect", cmd_intersect, "intersection of two trees embedded in a third", *cospan_args)
    add("join", cmd_join, "glue two trees along a common subtree (before pruning)", *span_args)
    add("sum", cmd_sum, "glue along a common subtree and prune subsumed arcs", *span_args)
    add("sub2super", cmd_sub2super, "smallest common supertree from a largest common subtree", *span_args)
    add("super2sub", cmd_super2sub, "largest common subtree from a smallest common supertree", *cospan_args)
    for name, fn, what in (("lcst", cmd_lcst, "largest common subtree"), ("scst", cmd_scst, "smallest common supertree")):
        p = add(name, fn, f"{what} by exhaustive search", "t1", "t2")
        p.add_argument("--max-nodes", type=int, default=None, help="input size cap (default 8 or $TREESPAN_MAX_NODES)")
    for name, fn, args_ in (("check-pullback", cmd_check_pullback, cospan_args), ("check-pushout", cmd_check_pushout, span_args)):
        p = add(name, fn, f"bounded check of the {name.split('-')[1]} universal property", *args_)
        p.add_argument("--bound", type=int, default=4, help="largest probe tree size (default 4, at most 6)")
        p.add_argument("--candidate", nargs=3, metavar=("P.tree", "G1.map", "G2.map"),
                       help="candidate to test instead of the constructed one")
    p = sub.add_parser("proptest", help="run the randomized property suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--full", action="store_true", help="full instance counts (slow)")
    p.add_argument("--show", type=int, default=3, help="violations to print per suite")
    p.set_defaults(func=cmd_proptest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (TreespanError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
