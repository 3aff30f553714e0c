"""Rooted trees, paths, least common ancestors and canonical forms.

Trees are immutable once validated.  Parent maps, depths and DFS entry/exit
times are computed at construction, so ancestor tests are O(1) and a path
query costs time proportional to the path length.

Size convention: every comparison of tree sizes in this package counts nodes.
For non-empty trees this orders trees exactly like counting arcs.
"""

from __future__ import annotations

import re
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import (
    CycleDetected,
    DanglingArc,
    MultipleRoots,
    NodeInDegreeExceeded,
    OriginMismatch,
    PreconditionViolation,
    RootMismatch,
    TreeValidationError,
    UnknownNode,
    UnreachableNode,
)

NodeId = str
Arc = tuple[NodeId, NodeId]
Path = tuple[NodeId, ...]

EMPTY_ENCODING = b"."


_LABEL = re.compile(r"\S+")


def _check_label(label: Hashable) -> None:
    if not isinstance(label, str) or _LABEL.fullmatch(label) is None:
        raise TreeValidationError(f"invalid node label {label!r}")


class RootedTree:
    """A node-labelled rooted tree with arcs directed away from the root.

    Build one with :func:`validate_tree` or :meth:`from_arcs`; the constructor
    itself is private.
    """

    __slots__ = ("nodes", "arcs", "root", "_parent", "_children", "_depth", "_tin", "_tout", "_preorder")

    def __init__(self, *, _nodes, _arcs, _root, _parent, _children, _depth, _tin, _tout, _preorder):
        self.nodes: tuple[NodeId, ...] = _nodes
        self.arcs: frozenset[Arc] = _arcs
        self.root: NodeId | None = _root
        self._parent = _parent
        self._children = _children
        self._depth = _depth
        self._tin = _tin
        self._tout = _tout
        self._preorder = _preorder

    @classmethod
    def from_arcs(
        cls, arcs: Iterable[Arc] = (), root: NodeId | None = None, nodes: Iterable[NodeId] = ()
    ) -> "RootedTree":
        """Convenience wrapper: nodes are the arc endpoints plus ``root`` plus ``nodes``."""
        arcs = [tuple(a) for a in arcs]
        all_nodes = set(nodes)
        for a, b in arcs:
            all_nodes.add(a)
            all_nodes.add(b)
        if root is not None:
            all_nodes.add(root)
        return validate_tree(all_nodes, arcs, root)

    @classmethod
    def empty(cls) -> "RootedTree":
        return validate_tree((), (), None)

    @classmethod
    def single(cls, label: NodeId) -> "RootedTree":
        return validate_tree((label,), (), label)

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node: object) -> bool:
        return node in self._parent

    def __iter__(self) -> Iterator[NodeId]:
        return iter(self.nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootedTree):
            return NotImplemented
        return self.root == other.root and self.arcs == other.arcs and set(self.nodes) == set(other.nodes)

    def __hash__(self) -> int:
        return hash((self.root, self.arcs, frozenset(self.nodes)))

    def __repr__(self) -> str:
        if not self.nodes:
            return "RootedTree(empty)"
        arcs = ", ".join(f"{a}->{b}" for a, b in sorted(self.arcs))
        return f"RootedTree(root={self.root!r}, arcs=[{arcs}])"

    @property
    def size(self) -> int:
        return len(self.nodes)

    def is_empty(self) -> bool:
        return not self.nodes

    def _require(self, node: NodeId) -> None:
        if node not in self._parent:
            raise UnknownNode(f"unknown node {node!r}")

    def parent(self, node: NodeId) -> NodeId | None:
        self._require(node)
        return self._parent[node]

    def children(self, node: NodeId) -> tuple[NodeId, ...]:
        self._require(node)
        return self._children[node]

    def out_degree(self, node: NodeId) -> int:
        return len(self.children(node))

    def in_degree(self, node: NodeId) -> int:
        return 0 if self.parent(node) is None else 1

    def depth(self, node: NodeId) -> int:
        self._require(node)
        return self._depth[node]

    def is_ancestor(self, a: NodeId, b: NodeId) -> bool:
        """True iff a path ``a ~> b`` exists (trivial path included)."""
        self._require(a)
        self._require(b)
        return self._tin[a] <= self._tin[b] and self._tout[b] <= self._tout[a]

    def preorder(self) -> tuple[NodeId, ...]:
        """Nodes in depth-first preorder, children visited in label order."""
        return self._preorder

    def leaves(self) -> tuple[NodeId, ...]:
        return tuple(v for v in self.nodes if not self._children[v])

    def height(self) -> int:
        return max(self._depth.values(), default=-1)

    def parent_map(self) -> Mapping[NodeId, NodeId | None]:
        return dict(self._parent)

    def relabel(self, mapping: Mapping[NodeId, NodeId]) -> "RootedTree":
        """Copy of the tree with every node renamed through an injective ``mapping``."""
        if len(set(mapping[v] for v in self.nodes)) != len(self.nodes):
            raise PreconditionViolation("relabelling is not injective")
        return validate_tree(
            (mapping[v] for v in self.nodes),
            ((mapping[a], mapping[b]) for a, b in self.arcs),
            None if self.root is None else mapping[self.root],
        )


def validate_tree(nodes: Iterable[NodeId], arcs: Iterable[Arc], root: NodeId | None = None) -> RootedTree:
    """Check the rooted-tree invariants and build an immutable :class:`RootedTree`.

    ``root`` may be omitted, in which case the unique node of in-degree 0 is
    used.  Raises a :class:`~treespan.errors.TreeValidationError` subclass
    naming the first violated condition.
    """
    node_set = set()
    for v in nodes:
        _check_label(v)
        node_set.add(v)
    arc_set = set()
    parent: dict[NodeId, NodeId | None] = {}
    kids: dict[NodeId, list[NodeId]] = {v: [] for v in node_set}
    for a, b in arcs:
        if a not in node_set or b not in node_set:
            raise DanglingArc(f"arc ({a}, {b}) references an undeclared node")
        if a == b:
            raise CycleDetected(f"self-loop on {a!r}")
        if b in parent:
            if parent[b] == a:
                continue
            first, second = sorted((parent[b], a))
            raise NodeInDegreeExceeded(f"node {b!r} has parents {first!r} and {second!r}")
        parent[b] = a
        kids[a].append(b)
        arc_set.add((a, b))

    if not node_set:
        if root is not None:
            raise RootMismatch("empty tree cannot have a root")
        return RootedTree(
            _nodes=(), _arcs=frozenset(), _root=None, _parent={}, _children={},
            _depth={}, _tin={}, _tout={}, _preorder=(),
        )

    sources = sorted(v for v in node_set if v not in parent)
    if root is not None:
        if root not in node_set:
            raise RootMismatch(f"declared root {root!r} is not a node")
        if root in parent:
            raise RootMismatch(f"declared root {root!r} has parent {parent[root]!r}")
        if len(sources) > 1:
            stray = [v for v in sources if v != root]
            raise UnreachableNode(f"nodes {stray} are not reachable from root {root!r}")
    else:
        if len(sources) > 1:
            raise MultipleRoots(f"several nodes of in-degree 0: {sources}")
        if not sources:
            raise CycleDetected("no node of in-degree 0")
        root = sources[0]
    parent[root] = None

    children = {v: tuple(sorted(c)) if len(c) > 1 else tuple(c) for v, c in kids.items()}
    # preorder by an explicit stack; tout is the end of each subtree's interval
    depth: dict[NodeId, int] = {root: 0}
    preorder: list[NodeId] = []
    stack = [root]
    while stack:
        v = stack.pop()
        preorder.append(v)
        ch = children[v]
        if ch:
            d = depth[v] + 1
            for c in ch:
                depth[c] = d
            stack.extend(reversed(ch))
    tin = {v: i for i, v in enumerate(preorder)}
    tout = dict.fromkeys(preorder, 1)
    for v in reversed(preorder):
        p = parent[v]
        if p is not None:
            tout[p] += tout[v]
    for v in preorder:
        tout[v] += tin[v]

    if len(preorder) != len(node_set):
        missing = sorted(node_set - set(preorder))
        raise CycleDetected(f"nodes {missing} lie on a cycle unreachable from {root!r}")

    return RootedTree(
        _nodes=tuple(sorted(node_set)), _arcs=frozenset(arc_set), _root=root, _parent=parent,
        _children=children, _depth=depth, _tin=tin, _tout=tout, _preorder=tuple(preorder),
    )


def path_between(t: RootedTree, a: NodeId, b: NodeId) -> Path | None:
    """The unique path ``a ~> b`` as a node tuple, or ``None``."""
    if not t.is_ancestor(a, b):
        return None
    out = [b]
    v = b
    while v != a:
        v = t._parent[v]
        out.append(v)
    out.reverse()
    return tuple(out)


def is_path(t: RootedTree, p: Sequence[NodeId]) -> bool:
    if not p:
        return False
    for v in p:
        if v not in t:
            return False
    return all(t._parent[p[i + 1]] == p[i] for i in range(len(p) - 1))


def _require_path(t: RootedTree, p: Sequence[NodeId]) -> None:
    for v in p:
        t._require(v)
    if not is_path(t, p):
        raise PreconditionViolation(f"{tuple(p)} is not a path")


def is_elementary(t: RootedTree, p: Sequence[NodeId]) -> bool:
    """Every intermediate node of ``p`` has out-degree 1."""
    _require_path(t, p)
    return all(len(t._children[v]) == 1 for v in p[1:-1])


def least_common_ancestor(t: RootedTree, b: NodeId, c: NodeId) -> NodeId:
    """LCA of ``b`` and ``c``.

    If one of them is an ancestor of the other, that (shallower) node is
    returned; the usual definition only covers pairs not joined by a path.
    """
    t._require(b)
    t._require(c)
    depth, parent = t._depth, t._parent
    while depth[b] > depth[c]:
        b = parent[b]
    while depth[c] > depth[b]:
        c = parent[c]
    while b != c:
        b = parent[b]
        c = parent[c]
    return b


def paths_diverge(t: RootedTree, p: Sequence[NodeId], q: Sequence[NodeId]) -> bool:
    """Two non-trivial paths with a common origin diverge iff the origin is their only shared node."""
    _require_path(t, p)
    _require_path(t, q)
    if p[0] != q[0]:
        raise OriginMismatch(f"paths start at {p[0]!r} and {q[0]!r}")
    if len(p) < 2 or len(q) < 2:
        raise PreconditionViolation("divergence is only defined for non-trivial paths")
    return not (set(p[1:]) & set(q[1:]))


def _postorder(t: RootedTree) -> list[NodeId]:
    return list(reversed(t.preorder()))


def canonical_encoding(t: RootedTree) -> bytes:
    """AHU-style canonical form: nested parentheses with sorted child encodings.

    Two trees get the same encoding iff they are isomorphic as unlabelled
    rooted trees.  Cost is O(n * height), fine for the small trees it is used on;
    :func:`trees_isomorphic` uses an interned linear variant instead.
    """
    if t.is_empty():
        return EMPTY_ENCODING
    enc: dict[NodeId, bytes] = {}
    for v in _postorder(t):
        enc[v] = b"(" + b"".join(sorted(enc[c] for c in t._children[v])) + b")"
    return enc[t.root]


def _shape_ids(t: RootedTree, table: dict[tuple[int, ...], int]) -> dict[NodeId, int]:
    ids: dict[NodeId, int] = {}
    for v in _postorder(t):
        key = tuple(sorted(ids[c] for c in t._children[v]))
        ids[v] = table.setdefault(key, len(table))
    return ids


def trees_isomorphic(a: RootedTree, b: RootedTree) -> bool:
    if len(a) != len(b):
        return False
    if a.is_empty():
        return True
    table: dict[tuple[int, ...], int] = {}
    return _shape_ids(a, table)[a.root] == _shape_ids(b, table)[b.root]


def tree_isomorphism(a: RootedTree, b: RootedTree) -> dict[NodeId, NodeId] | None:
    """An explicit isomorphism ``a -> b`` (node map), or ``None``."""
    if len(a) != len(b):
        return None
    if a.is_empty():
        return {}
    table: dict[tuple[int, ...], int] = {}
    ia, ib = _shape_ids(a, table), _shape_ids(b, table)
    if ia[a.root] != ib[b.root]:
        return None
    out = {a.root: b.root}
    stack = [a.root]
    while stack:
        v = stack.pop()
        w = out[v]
        ca = sorted(a._children[v], key=lambda x: (ia[x], x))
        cb = sorted(b._children[w], key=lambda x: (ib[x], x))
        for x, y in zip(ca, cb):
            out[x] = y
            stack.append(x)
    return out


def tree_from_encoding(encoding: bytes, prefix: str = "n") -> RootedTree:
    """Materialise a tree from a parenthesis encoding; nodes get preorder labels ``n0, n1, ...``."""
    if encoding == EMPTY_ENCODING:
        return RootedTree.empty()
    arcs: list[Arc] = []
    stack: list[NodeId] = []
    count = 0
    root = None
    for ch in encoding:
        if ch == ord("("):
            label = f"{prefix}{count}"
            count += 1
            if stack:
                arcs.append((stack[-1], label))
            else:
                root = label
            stack.append(label)
        elif ch == ord(")"):
            stack.pop()
        else:
            raise ValueError(f"bad encoding byte {chr(ch)!r}")
    return RootedTree.from_arcs(arcs, root=root)
