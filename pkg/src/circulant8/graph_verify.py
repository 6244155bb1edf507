"""Independent checks: BFS on the circulant itself, brute-force closest vectors,
and exhaustive sweeps of the reduction pipeline.

Nothing here trusts the reduction tables. The graph is built from ``n`` and
the step set alone, and distances come from breadth-first search.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .lattice_core import ZERO, LatticeSystem, Vec4, build_system, lies_between
from .quotient_iso import generator_set, project
from .reduction_engine import (
    AnchorViolation,
    NoMatchingCase,
    ReductionError,
    between_anchor,
    canonical_orthant,
    reduce,
    replay_word,
    rules_for,
    stage2_resolve,
    supports,
    word_from_certificate,
)

__all__ = [
    "CirculantGraph",
    "DistanceProfile",
    "CoveringReport",
    "CaseCoverageReport",
    "build_circulant",
    "bfs_distances",
    "diameter",
    "distance_profile",
    "cvp_oracle",
    "cvp_distances",
    "verify_covering",
    "verify_case_coverage",
]


@dataclass(frozen=True)
class CirculantGraph:
    n: int
    connection: tuple[int, ...]

    @property
    def offsets(self) -> np.ndarray:
        s = np.array(self.connection, dtype=np.int64)
        return np.concatenate([s, self.n - s])

    @property
    def degree(self) -> int:
        return 2 * len(self.connection)


def build_circulant(n: int, steps: Iterable[int]) -> CirculantGraph:
    steps = list(steps)
    if n < 2:
        raise ValueError(f"need at least 2 vertices, got n={n}")
    if not steps:
        raise ValueError("empty step set")
    seen: dict[int, int] = {}
    for s in steps:
        if not 1 <= s < n:
            raise ValueError(f"step {s} outside 1..{n - 1}")
        if 2 * s == n:
            raise ValueError(f"step {s} = n/2 is an involution")
        canon = min(s, n - s)
        if canon in seen:
            raise ValueError(f"step {s} duplicates {seen[canon]} (as itself or its inverse) in Z_{n}")
        seen[canon] = s
    return CirculantGraph(n, tuple(sorted(steps)))


def bfs_distances(g: CirculantGraph) -> np.ndarray:
    """Distance from vertex 0 to every vertex; -1 where unreachable."""
    dist = np.full(g.n, -1, dtype=np.int32)
    dist[0] = 0
    frontier = np.array([0], dtype=np.int64)
    offs = g.offsets
    d = 0
    while frontier.size:
        d += 1
        nb = ((frontier[:, None] + offs[None, :]) % g.n).ravel()
        nb = np.unique(nb[dist[nb] < 0])
        dist[nb] = d
        frontier = nb
    return dist


def diameter(g: CirculantGraph) -> int:
    """Eccentricity of vertex 0, which is the diameter since circulants are vertex-transitive.

    Raises ValueError when the steps do not generate Z_n.
    """
    dist = bfs_distances(g)
    if (dist < 0).any():
        raise ValueError(f"graph on Z_{g.n} with steps {g.connection} is disconnected")
    return int(dist.max())


@dataclass(frozen=True)
class DistanceProfile:
    histogram: tuple[int, ...]

    @property
    def diameter(self) -> int:
        return len(self.histogram) - 1

    @property
    def total(self) -> int:
        return sum(self.histogram)


def distance_profile(g: CirculantGraph) -> DistanceProfile:
    dist = bfs_distances(g)
    reach = dist[dist >= 0]
    return DistanceProfile(tuple(int(c) for c in np.bincount(reach)))


# ---------------------------------------------------------------------------
# closest vectors by enumeration


@lru_cache(maxsize=32)
def _lattice_window(sys: LatticeSystem, window: int) -> np.ndarray:
    r = np.arange(-window, window + 1)
    coeffs = np.array(list(itertools.product(r, repeat=4)), dtype=np.int64)
    basis = np.array(sys.basis, dtype=np.int64)
    return coeffs @ basis


def cvp_distances(xs: np.ndarray, sys: LatticeSystem, window: int = 3, chunk: int = 2048) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`cvp_oracle` over the rows of ``xs``: (distances, argmin points)."""
    pts = _lattice_window(sys, window)
    xs = np.asarray(xs, dtype=np.int64).reshape(-1, 4)
    dists = np.empty(len(xs), dtype=np.int64)
    best = np.empty((len(xs), 4), dtype=np.int64)
    for lo in range(0, len(xs), chunk):
        block = xs[lo : lo + chunk]
        d = np.abs(block[:, None, :] - pts[None, :, :]).sum(axis=2)
        j = d.argmin(axis=1)
        dists[lo : lo + chunk] = d[np.arange(len(block)), j]
        best[lo : lo + chunk] = pts[j]
    return dists, best


def cvp_oracle(x: Sequence[int], sys: LatticeSystem, window: int = 3) -> tuple[int, Vec4]:
    """Nearest lattice point to ``x`` in l1 among ``sum c_i v_i`` with ``|c_i| <= window``."""
    d, w = cvp_distances(np.array([x]), sys, window)
    return int(d[0]), Vec4(*(int(c) for c in w[0]))


# ---------------------------------------------------------------------------
# reports


class _KV:
    def summary(self) -> dict:
        raise NotImplementedError

    def to_kv(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.summary().items())


@dataclass
class CoveringReport(_KV):
    k: int
    n: int
    method: str
    max_word_length: int = 0
    bfs_diameter: int = -1
    worst_residues: list[int] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        return {
            "check": "covering",
            "k": self.k,
            "n": self.n,
            "method": self.method,
            "max_word_length": self.max_word_length,
            "bfs_diameter": self.bfs_diameter,
            "failures": len(self.failures),
            "status": "pass" if self.ok else "fail",
        }


def _lift(g: int, n: int) -> int:
    return g if g <= n - g else g - n


def verify_covering(k: int) -> CoveringReport:
    """Every residue of Z_n within ``k`` steps, by the reduction pipeline and by BFS.

    The pipeline seeds residue ``g`` at ``(g', 0, 0, 0)`` where ``g'`` is the
    representative of ``g`` of least magnitude. For k without reduction
    tables only BFS is run.
    """
    sys = build_system(k)
    gens = generator_set(k)
    n = gens.n
    dist = bfs_distances(build_circulant(n, gens.s))
    rep = CoveringReport(k, n, "bfs")
    if (dist < 0).any():
        rep.failures.append(f"{int((dist < 0).sum())} residues unreachable")
        return rep
    rep.bfs_diameter = int(dist.max())
    if rep.bfs_diameter > k:
        rep.failures.append(f"bfs diameter {rep.bfs_diameter} > k={k}")
    if not supports(sys):
        rep.max_word_length = rep.bfs_diameter
        rep.worst_residues = [int(g) for g in np.flatnonzero(dist == rep.bfs_diameter)[:5]]
        return rep

    rep.method = "reduce+bfs"
    lengths = np.zeros(n, dtype=np.int64)
    for g in range(n):
        x = Vec4(_lift(g, n), 0, 0, 0)
        try:
            cert = reduce(x, sys)
        except ReductionError as e:
            rep.failures.append(f"residue {g}: {e}")
            continue
        word = word_from_certificate(cert)
        end = replay_word(word, gens)
        if end != g:
            rep.failures.append(f"residue {g}: word replays to {end}")
        if len(word) > k:
            rep.failures.append(f"residue {g}: word length {len(word)} > {k}")
        if len(word) < dist[g]:
            rep.failures.append(f"residue {g}: word length {len(word)} beats bfs distance {dist[g]}")
        lengths[g] = len(word)
    rep.max_word_length = int(lengths.max())
    rep.worst_residues = [int(g) for g in np.flatnonzero(lengths == rep.max_word_length)[:5]]
    return rep


@dataclass
class CaseCoverageReport(_KV):
    k: int
    points: int = 0
    between: int = 0
    dispatched: int = 0
    no_matching_case: int = 0
    anchor_violations: int = 0
    unsound: int = 0
    max_word_length: int = 0
    hits: Counter = field(default_factory=Counter)
    pipeline_hits: Counter = field(default_factory=Counter)
    unused_rules: list[str] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.no_matching_case or self.anchor_violations or self.unsound)

    def summary(self) -> dict:
        return {
            "check": "case_coverage",
            "k": self.k,
            "points": self.points,
            "between": self.between,
            "dispatched": self.dispatched,
            "no_matching_case": self.no_matching_case,
            "anchor_violations": self.anchor_violations,
            "unsound": self.unsound,
            "max_word_length": self.max_word_length,
            "rules": len(self.hits) + len(self.unused_rules),
            "rules_fired": len(self.hits),
            "rules_fired_by_pipeline": len(self.pipeline_hits),
            "status": "pass" if self.ok else "fail",
        }


def _same_orthant(x, v) -> bool:
    return all(not ((xc > 0 and vc < 0) or (xc < 0 and vc > 0)) for xc, vc in zip(x, v))


def verify_case_coverage(k: int, keep: int = 20) -> CaseCoverageReport:
    """Sweep every x with ``|x_i| <= a+1`` through the stage-2 machinery.

    Two passes share the sweep. The pipeline pass runs between_anchor and
    then the rule table of the canonical orthant, as :func:`reduce` does.
    The table pass hands x (or -x) to the table of *every* orthant that
    contains it and where it is not already between 0 and the orthant vector;
    rule hit counts come from this pass, since canonical dispatch alone never
    reaches the points of shared orthant faces that some rules exist for.
    """
    sys = build_system(k)
    if not supports(sys):
        raise ValueError(f"case tables need k >= 4 (even) or k >= 5 (odd), got k={k}")
    rep = CaseCoverageReport(k)
    c = sys.a + 1

    def fail(kind: str, msg: str):
        setattr(rep, kind, getattr(rep, kind) + 1)
        if len(rep.findings) < keep:
            rep.findings.append(msg)

    signed = [(i, s, sys.vec(s * i)) for i in range(1, 9) for s in (1, -1)]
    for t in itertools.product(range(-c, c + 1), repeat=4):
        x = Vec4(*t)
        rep.points += 1
        try:
            cert = between_anchor(x, sys)
            if cert is not None:
                rep.between += 1
            else:
                i, neg = canonical_orthant(x, sys)
                cert = stage2_resolve(-x if neg else x, i, sys)
                if neg:
                    cert.residual = -cert.residual
                rep.pipeline_hits[cert.stage2_case] += 1
                rep.dispatched += 1
            w = x - cert.residual
            if cert.word_length > k or project(w, sys) != 0:
                fail("unsound", f"k={k} x={x}: word length {cert.word_length}, w={w}")
            rep.max_word_length = max(rep.max_word_length, cert.word_length)
        except NoMatchingCase as e:
            fail("no_matching_case", str(e))
        except AnchorViolation as e:
            fail("anchor_violations", str(e))

        for i, s, v in signed:
            if not _same_orthant(x, v) or lies_between(ZERO, x, v):
                continue
            y = x if s > 0 else -x
            try:
                cert = stage2_resolve(y, i, sys)
            except NoMatchingCase as e:
                fail("no_matching_case", str(e))
                continue
            except AnchorViolation as e:
                fail("anchor_violations", str(e))
                continue
            rep.hits[cert.stage2_case] += 1
            if cert.word_length > k:
                fail("unsound", f"k={k} rule {cert.stage2_case} x={y}: word length {cert.word_length}")

    rep.unused_rules = sorted(r.case_id for r in rules_for(sys) if r.case_id not in rep.hits)
    return rep

