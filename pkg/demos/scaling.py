"""Time both conversions on growing inputs; doubling n should roughly double the time."""

import random
import sys
import time

from treespan import Embedding, EmbeddingKind, SpanResult
from treespan.generators import random_tree, subdivide
from treespan.solvers import sub_to_super, super_to_sub

K = EmbeddingKind.HOMEOMORPHIC
sizes = [int(a) for a in sys.argv[1:]] or [5_000, 10_000, 20_000, 40_000]

prev = None
for n in sizes:
    t = random_tree(n, random.Random(n))
    big = subdivide(t)
    ident = {v: v for v in t.nodes}
    span = SpanResult(t, Embedding(t, t, ident, K), Embedding(t, big, ident, K))
    start = time.perf_counter()
    cospan = sub_to_super(span)
    up = time.perf_counter() - start
    start = time.perf_counter()
    super_to_sub(cospan)
    down = time.perf_counter() - start
    ratio = "" if prev is None else f"  ratios {up / prev[0]:.2f} {down / prev[1]:.2f}"
    print(f"n={n:>7}  sub_to_super {up:.3f}s  super_to_sub {down:.3f}s{ratio}")
    prev = (up, down)
