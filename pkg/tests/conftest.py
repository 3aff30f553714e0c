from __future__ import annotations

import pytest

from treespan import Embedding, EmbeddingKind, RootedTree

K = EmbeddingKind

# Small tree S (a fork) and the six-node tree T it is mapped into.
S_ARCS = [("r", "x"), ("r", "y")]
T_ARCS = [("1", "2"), ("1", "3"), ("3", "4"), ("4", "5"), ("4", "6")]

F = {
    0: {"r": "1", "x": "3", "y": "4"},
    1: {"r": "1", "x": "5", "y": "6"},
    2: {"r": "1", "x": "2", "y": "6"},
    3: {"r": "1", "x": "2", "y": "4"},
    4: {"r": "1", "x": "2", "y": "3"},
    5: {"r": "4", "x": "5", "y": "6"},
}


def tree(*arcs, root=None, nodes=()):
    return RootedTree.from_arcs(arcs, root=root, nodes=nodes)


def ident(s, t, kind):
    return Embedding(s, t, {v: v for v in s.nodes}, kind)


@pytest.fixture
def S():
    return RootedTree.from_arcs(S_ARCS)


@pytest.fixture
def T():
    return RootedTree.from_arcs(T_ARCS)


@pytest.fixture
def forked():
    """Two forks sharing their leaves, both minors of a three-level tree."""
    big = tree(("a1", "a2"), ("a2", "b"), ("a2", "c"))
    left = tree(("a1", "b"), ("a1", "c"))
    right = tree(("a2", "b"), ("a2", "c"))
    return big, left, right


CRITERIA = {
    1: "example classification table",
    2: "kind hierarchy",
    3: "path lifting, LCA preservation, bijective minors",
    4: "intersection correctness",
    5: "optimality duality and size law",
    6: "round-trip isomorphism",
    7: "universal properties",
    8: "pruning order independence",
    9: "linear scaling",
}


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion that ran."""
    outcomes: dict[int, list[tuple[str, str]]] = {}
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            if "test_acceptance.py::test_c" not in rep.nodeid:
                continue
            name = rep.nodeid.split("::")[-1]
            number = int(name[len("test_c"):].split("_")[0])
            outcomes.setdefault(number, []).append((status, name))
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(outcomes):
        bad = sorted({name for status, name in outcomes[number] if status != "passed"})
        verdict = "PASS" if not bad else "FAIL (" + ", ".join(bad) + ")"
        terminalreporter.write_line(f"criterion {number} [{CRITERIA[number]}]: {verdict}")
