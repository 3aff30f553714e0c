import subprocess
import sys
from pathlib import Path

import pytest

from treespan import cli, parse_mapping, parse_tree, trees_isomorphic
from treespan.errors import InternalInvariantError

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def d(name):
    return str(DATA / name)


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("i, kind", [(0, "none"), (1, "minor"), (2, "topological"), (3, "homeomorphic"), (4, "isomorphic"), (5, "isomorphic")])
def test_classify(capsys, i, kind):
    code, out, _ = run(capsys, "classify", d("S.tree"), d("T.tree"), d(f"f{i}.map"))
    assert out.strip() == kind
    assert code == (1 if i == 0 else 0)


def test_verify_true(capsys):
    code, out, _ = run(capsys, "verify", "--kind", "minor", d("S.tree"), d("T.tree"), d("f1.map"))
    assert code == 0 and out == "minor: yes; topological: no\n"


def test_verify_false(capsys):
    code, out, _ = run(capsys, "verify", "--kind", "top", d("S.tree"), d("T.tree"), d("f1.map"))
    assert code == 1
    assert "topological: no" in out and "not-divergent" in out


def test_verify_isomorphic_has_no_stronger(capsys):
    code, out, _ = run(capsys, "verify", "--kind", "iso", d("S.tree"), d("T.tree"), d("f4.map"))
    assert code == 0 and out == "isomorphic: yes\n"


def test_lcst(capsys, tmp_path):
    prefix = tmp_path / "lc"
    code, out, _ = run(capsys, "lcst", "--kind", "iso", "--out", prefix, d("S.tree"), d("T.tree"))
    assert code == 0 and out.startswith("# largest common subtree (3 nodes)")
    apex = parse_tree((tmp_path / "lc.tree").read_text())
    assert len(apex) == 3
    assert set(parse_mapping((tmp_path / "lc.right.map").read_text()).values()) <= set("123456")


def test_scst(capsys):
    code, out, _ = run(capsys, "scst", "--kind", "iso", "--max-nodes", "6", d("S.tree"), d("T.tree"))
    assert code == 0 and "(6 nodes)" in out


def test_scst_bound(capsys):
    code, _, err = run(capsys, "scst", "--max-nodes", "2", d("S.tree"), d("T.tree"))
    assert code == 3 and "BoundExceeded" in err


def test_intersect_forest(capsys):
    code, out, _ = run(capsys, "intersect", "--kind", "minor", d("U1.tree"), d("U2.tree"), d("u1.map"), d("u2.map"), d("U.tree"))
    assert code == 0
    assert "# shape: forest" in out
    assert "root ⊥\narc ⊥ b\narc ⊥ c\n" in out


def test_check_pullback_forest(capsys):
    code, out, _ = run(capsys, "check-pullback", "--kind", "minor", "--bound", "3",
                       d("U1.tree"), d("U2.tree"), d("u1.map"), d("u2.map"), d("U.tree"))
    assert code == 0 and "CounterexampleFound" in out


def test_check_pushout_constructed(capsys):
    code, out, _ = run(capsys, "check-pushout", "--kind", "iso", d("S.tree"), d("T.tree"), d("S.tree"), d("id_S.map"), d("f4.map"))
    assert code == 0 and out.startswith("VerifiedUpToBound")


def test_sum_and_dot(capsys, tmp_path):
    dot = tmp_path / "sum.dot"
    code, out, _ = run(capsys, "sum", "--kind", "iso", "--dot", dot, "--debug-oracle",
                       d("S.tree"), d("T.tree"), d("S.tree"), d("id_S.map"), d("f4.map"))
    assert code == 0 and "(6 nodes)" in out
    text = dot.read_text()
    assert '[label="r|1"]' in text
    body = out.split("# left")[0].split("\n", 1)[1]
    assert trees_isomorphic(parse_tree(body), parse_tree((DATA / "T.tree").read_text()))


def test_sub2super_plain(capsys):
    code, out, _ = run(capsys, "sub2super", "--kind", "iso", "--plain", d("S.tree"), d("T.tree"), d("S.tree"), d("id_S.map"), d("f4.map"))
    assert code == 0
    assert "1:" not in out and "2:" not in out


def test_join_marks_subsumed(capsys, tmp_path):
    (tmp_path / "a.tree").write_text("root x1\narc x1 y1\n")
    (tmp_path / "p.tree").write_text("root x2\narc x2 c\narc c y2\n")
    (tmp_path / "mu.tree").write_text("root x\narc x y\n")
    (tmp_path / "m1.map").write_text("map x x1\nmap y y1\n")
    (tmp_path / "m2.map").write_text("map x x2\nmap y y2\n")
    files = [tmp_path / n for n in ("a.tree", "p.tree", "mu.tree", "m1.map", "m2.map")]
    code, out, _ = run(capsys, "join", "--kind", "hom", *files)
    assert code == 0
    assert "arc x1 y1  # subsumed" in out
    assert "# class x1 = 1:x1 2:x2" in out


def test_super2sub(capsys, tmp_path):
    code, _, _ = run(capsys, "scst", "--kind", "iso", "--out", tmp_path / "sc", d("S.tree"), d("T.tree"))
    assert code == 0
    code, out, _ = run(capsys, "super2sub", "--kind", "iso", d("S.tree"), d("T.tree"),
                       tmp_path / "sc.left.map", tmp_path / "sc.right.map", tmp_path / "sc.tree")
    assert code == 0 and "(3 nodes)" in out


def test_proptest_reports_minor_round_trip(capsys):
    code, out, _ = run(capsys, "proptest", "--seed", "0", "--show", "1")
    assert code == 1
    assert "hierarchy:" in out and "duality:" in out


class TestExitCodes:
    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "classify", "nope.tree", d("T.tree"), d("f1.map"))
        assert code == 3 and err.startswith("error:")

    def test_bad_kind(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["verify", "--kind", "bogus", d("S.tree"), d("T.tree"), d("f1.map")])
        assert info.value.code == 2

    def test_no_command(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main([])
        assert info.value.code == 2

    def test_invalid_tree(self, capsys, tmp_path):
        bad = tmp_path / "bad.tree"
        bad.write_text("root r\narc r x\narc q x\n")
        code, _, err = run(capsys, "classify", bad, d("T.tree"), d("f1.map"))
        assert code == 3 and "NodeInDegreeExceeded" in err

    def test_not_an_embedding(self, capsys):
        code, _, err = run(capsys, "sum", d("S.tree"), d("T.tree"), d("S.tree"), d("id_S.map"), d("f0.map"))
        assert code == 3 and "NotAnEmbedding" in err

    def test_internal(self, capsys, monkeypatch):
        def boom(*_a, **_k):
            raise InternalInvariantError("boom")

        monkeypatch.setattr(cli, "classify_embedding", boom)
        code, _, err = run(capsys, "classify", d("S.tree"), d("T.tree"), d("f1.map"))
        assert code == 4 and "internal error" in err


def test_deterministic_subprocess():
    argv = [sys.executable, "-m", "treespan.cli", "lcst", "--kind", "top", d("T.tree"), d("U.tree")]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first.startswith(b"# largest common subtree")
