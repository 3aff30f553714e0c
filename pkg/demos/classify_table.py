"""Classify six maps of a fork into a six-node tree and report the first violation of each."""

from pathlib import Path

from treespan import ALL_KINDS, classify_embedding, parse_mapping, parse_tree, verify_embedding

DATA = Path(__file__).resolve().parent / "data"

S = parse_tree((DATA / "S.tree").read_text())
T = parse_tree((DATA / "T.tree").read_text())

print(f"{'map':<4} {'strongest kind':<15} first failure at the next stronger kind")
for i in range(6):
    f = parse_mapping((DATA / f"f{i}.map").read_text())
    kind = classify_embedding(S, T, f)
    stronger = [k for k in ALL_KINDS if kind is None or k > kind]  # strongest first
    note = str(verify_embedding(S, T, f, stronger[-1]).violation) if stronger else "-"
    print(f"f{i:<3} {kind.name.lower() if kind is not None else 'none':<15} {note}")
