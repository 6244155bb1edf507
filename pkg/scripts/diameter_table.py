"""Tabulate order, BFS diameter, distance profile and ball efficiency per k.

    python3 scripts/diameter_table.py --kmin 2 --kmax 20
    python3 scripts/diameter_table.py --kmax 12 --csv table.csv
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import asdict, dataclass

from circulant8.graph_verify import build_circulant, distance_profile
from circulant8.lattice_core import ball_size
from circulant8.quotient_iso import generator_set


@dataclass
class Config:
    kmin: int = 2
    kmax: int = 20
    csv: str | None = None


@dataclass
class Row:
    k: int
    n: int
    gens: str
    diameter: int
    ball: int
    efficiency: float  # n / |S_k|
    last_shell: int  # vertices at maximum distance
    seconds: float


def run(cfg: Config) -> list[Row]:
    rows = []
    for k in range(cfg.kmin, cfg.kmax + 1):
        g = generator_set(k)
        t = time.perf_counter()
        prof = distance_profile(build_circulant(g.n, g.s))
        dt = time.perf_counter() - t
        b = ball_size(k)
        rows.append(
            Row(k, g.n, ",".join(map(str, g.s)), prof.diameter, b, round(g.n / b, 4), prof.histogram[-1], round(dt, 4))
        )
    return rows


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--kmin", type=int, default=Config.kmin)
    ap.add_argument("--kmax", type=int, default=Config.kmax)
    ap.add_argument("--csv")
    cfg = Config(**vars(ap.parse_args(argv)))
    rows = run(cfg)
    print(f"{'k':>3} {'n':>8} {'diam':>4} {'|S_k|':>8} {'n/|S_k|':>8} {'last':>6}  gens")
    for r in rows:
        flag = "" if r.diameter == r.k else "  <- differs from k"
        print(f"{r.k:>3} {r.n:>8} {r.diameter:>4} {r.ball:>8} {r.efficiency:>8.4f} {r.last_shell:>6}  {r.gens}{flag}")
    if cfg.csv:
        with open(cfg.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(asdict(rows[0])))
            w.writeheader()
            w.writerows(asdict(r) for r in rows)
    return 0 if all(r.diameter <= r.k for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
