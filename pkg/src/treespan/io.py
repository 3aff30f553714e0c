"""Line-oriented text formats for trees and node mappings, plus DOT export.

Tree files::

    # comment
    root 1
    arc 1 2
    arc 1 3

Mapping files hold ``map <src> <dst>`` lines.  A file with no directives is
the empty tree (or the empty mapping).
"""

from __future__ import annotations

from typing import Mapping

from .errors import DuplicateSource, ParseError, ReservedLabel
from .pullback import FRESH_ROOT
from .tree import NodeId, RootedTree, validate_tree


def _directives(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _label(token: str, lineno: int) -> NodeId:
    if token == FRESH_ROOT:
        raise ReservedLabel(f"label {FRESH_ROOT!r} is reserved", lineno)
    return token


def parse_tree(text: str) -> RootedTree:
    root = None
    nodes: list[NodeId] = []
    arcs: list[tuple[NodeId, NodeId]] = []
    for lineno, words in _directives(text):
        head, args = words[0], words[1:]
        if head == "root":
            if len(args) != 1:
                raise ParseError("expected 'root <label>'", lineno)
            if root is not None:
                raise ParseError("second 'root' line", lineno)
            root = _label(args[0], lineno)
            nodes.append(root)
        elif head == "arc":
            if len(args) != 2:
                raise ParseError("expected 'arc <parent> <child>'", lineno)
            a, b = (_label(x, lineno) for x in args)
            arcs.append((a, b))
            nodes.extend((a, b))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    return validate_tree(nodes, arcs, root)


def serialize_tree(t: RootedTree) -> str:
    if t.is_empty():
        return ""
    lines = [f"root {t.root}"]
    lines += [f"arc {a} {b}" for a, b in sorted(t.arcs)]
    return "\n".join(lines) + "\n"


def parse_mapping(text: str) -> dict[NodeId, NodeId]:
    out: dict[NodeId, NodeId] = {}
    for lineno, words in _directives(text):
        if words[0] != "map" or len(words) != 3:
            raise ParseError("expected 'map <src> <dst>'", lineno)
        src, dst = words[1], words[2]
        if src in out:
            raise DuplicateSource(f"source {src!r} mapped twice", lineno)
        out[src] = dst
    return out


def serialize_mapping(m: Mapping[NodeId, NodeId]) -> str:
    return "".join(f"map {k} {m[k]}\n" for k in sorted(m))


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(t: RootedTree, marks: Mapping[NodeId, str] | None = None, name: str = "T") -> str:
    """Deterministic DOT digraph; ``marks`` gives display labels for some nodes."""
    return export_dot_graph(t.nodes, t.arcs, marks, name)


def export_dot_graph(nodes, arcs, marks: Mapping[NodeId, str] | None = None, name: str = "G") -> str:
    """Same as :func:`export_dot` for an arbitrary directed graph (e.g. an unpruned join)."""
    marks = marks or {}
    lines = [f"digraph {_quote(name)} {{"]
    for v in sorted(nodes):
        if v in marks:
            lines.append(f"  {_quote(v)} [label={_quote(marks[v])}];")
        else:
            lines.append(f"  {_quote(v)};")
    for a, b in sorted(arcs):
        lines.append(f"  {_quote(a)} -> {_quote(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
