"""How far the certified word lengths sit above the true graph distances.

For every residue g of Z_n the reduction pipeline yields a word of length at
most k; BFS gives the exact distance. The histogram of (word - distance)
shows how much the certificates overshoot.

    python3 scripts/word_length_gap.py --ks 4 5 6 7 8
"""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass, field

from circulant8.graph_verify import bfs_distances, build_circulant
from circulant8.lattice_core import build_system
from circulant8.quotient_iso import generator_set
from circulant8.reduction_engine import reduce


@dataclass
class Config:
    ks: list[int] = field(default_factory=lambda: [4, 5, 6, 7, 8])


def gap_histogram(k: int) -> tuple[Counter, int]:
    s = build_system(k)
    g = generator_set(k)
    dist = bfs_distances(build_circulant(g.n, g.s))
    hist: Counter = Counter()
    for r in range(g.n):
        x = (r if r <= g.n - r else r - g.n, 0, 0, 0)
        hist[reduce(x, s).word_length - int(dist[r])] += 1
    return hist, g.n


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ks", type=int, nargs="+", default=Config().ks)
    cfg = Config(**vars(ap.parse_args(argv)))
    bad = False
    for k in cfg.ks:
        hist, n = gap_histogram(k)
        bad |= min(hist) < 0
        exact = hist.get(0, 0)
        parts = " ".join(f"+{d}:{c}" for d, c in sorted(hist.items()))
        print(f"k={k} n={n} exact={exact / n:.3f} gaps {parts}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
