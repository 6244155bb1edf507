"""One test per acceptance criterion; each records a PASS/FAIL line that the
terminal summary prints (see conftest.py)."""

import itertools
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circulant8.graph_verify import (
    bfs_distances,
    build_circulant,
    cvp_distances,
    diameter,
    verify_case_coverage,
    verify_covering,
)
from circulant8.lattice_core import (
    Parity,
    Vec4,
    build_system,
    det4,
    l1_norm,
    lies_between,
    order_formula,
    orthant_signatures,
)
from circulant8.quotient_iso import combo_identities, generator_set, project
from circulant8.reduction_engine import load_rules, reduce, replay_word, stage1_reduce, word_from_certificate

RESULTS: list[str] = []


class record:
    """Context manager timing a criterion and logging one line for it."""

    def __init__(self, label: str, limit: float):
        self.label, self.limit = label, limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        ok = exc_type is None and dt < self.limit
        detail = f"{dt:.3f}s (limit {self.limit:g}s)"
        if exc_type is not None:
            detail += f": {exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}"
        RESULTS.append(f"{'PASS' if ok else 'FAIL'} {self.label} {detail}")
        if exc_type is None and not ok:
            raise AssertionError(f"{self.label} took {dt:.3f}s, limit {self.limit}s")
        return False


def _best_of(fn, reps=5):
    best = float("inf")
    out = None
    for _ in range(reps):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return out, best


def test_c1_base_cases():
    with record("criterion 1 base-case diameters, each < 1 ms best-of-5;", limit=1.0):
        for n, steps, want in ((32, (1, 4, 6, 15), 2), (104, (1, 16, 20, 27), 3)):
            g = build_circulant(n, steps)
            got, dt = _best_of(lambda: diameter(g))
            assert got == want, (n, got)
            assert dt < 1e-3, f"Z_{n}: {dt * 1e3:.3f} ms"


def test_c2_diameter_equals_k():
    with record("criterion 2 BFS diameter == k for k=2..20", limit=5.0):
        for k in range(2, 21):
            g = generator_set(k)
            assert diameter(build_circulant(g.n, g.s)) == k, k
        assert order_formula(20) == 89_240


def test_c3_determinant():
    bases = [build_system(k).basis for k in range(2, 51)]
    with record("criterion 3 |det| == L(8,k) for k=2..50", limit=0.010):
        for k, b in zip(range(2, 51), bases):
            assert abs(det4(b)) == order_formula(k), k


def test_c4_combinations():
    with record("criterion 4 combination identities for k=2..50", limit=5.0):
        for k in range(2, 51):
            s = build_system(k)
            g = generator_set(k)
            for j, (ident, gen) in enumerate(zip(combo_identities(s), g.s[1:])):
                assert ident.holds, (k, ident.name)
                shape = [0, 0, 0, 0]
                shape[j + 1] = -1
                assert list(ident.expected[1:]) == shape[1:]
                assert ident.constant % g.n == gen


def test_c5_norms_and_bounds():
    with record("criterion 5a l1 norms and coordinate bounds for k=2..50", limit=5.0):
        for k in range(2, 51):
            s = build_system(k)
            assert all(l1_norm(v) == 2 * k + 1 for v in s.vectors)
            big = {i for i, v in enumerate(s.vectors, start=1) for c in v if abs(c) > s.a + 1}
            assert all(abs(c) <= s.a + 2 for v in s.vectors for c in v)
            assert big == ({5, 7} if s.parity is Parity.EVEN else set())


def test_c5_orthants_from_k4():
    full = set(itertools.product((-1, 1), repeat=4))
    with record("criterion 5b 16 sign patterns, no zero coordinate, k=4..50", limit=5.0):
        for k in range(4, 51):
            s = build_system(k)
            assert orthant_signatures(s) == full
            assert all(c for v in s.vectors for c in v)


@pytest.mark.xfail(strict=True, reason="k=2 and k=3 vectors have zero coordinates, so only some orthants are strict")
def test_c5_orthants_base_cases():
    full = set(itertools.product((-1, 1), repeat=4))
    try:
        for k in (2, 3):
            s = build_system(k)
            assert orthant_signatures(s) == full, f"k={k}: {len(orthant_signatures(s) & full)} strict patterns"
            assert all(c for v in s.vectors for c in v), f"k={k}: zero coordinate"
    except AssertionError as e:
        RESULTS.append(f"XFAIL criterion 5c 16 sign patterns at k=2,3 ({str(e).splitlines()[0]})")
        raise
    RESULTS.append("FAIL criterion 5c expected failure at k=2,3 did not occur")


def test_c6_covering():
    with record("criterion 6 covering by reduce and BFS for k=2..8", limit=10.0):
        for k in range(2, 9):
            rep = verify_covering(k)
            assert rep.ok, (k, rep.failures[:3])
            assert rep.max_word_length <= k and rep.bfs_diameter <= k
            if k >= 4:
                assert rep.method == "reduce+bfs"


def test_c7_case_table_completeness():
    with record("criterion 7 case tables complete for k=4..9", limit=30.0):
        fired = set()
        for k in (4, 6, 8, 5, 7, 9):
            rep = verify_case_coverage(k)
            a = build_system(k).a
            assert rep.points == (2 * a + 3) ** 4
            assert rep.no_matching_case == 0 and rep.anchor_violations == 0 and rep.unsound == 0, rep.findings[:3]
            assert rep.max_word_length <= k
            fired |= set(rep.hits)
        every = {r.case_id for r in load_rules()}
        assert every - fired == set(), sorted(every - fired)[:10]


def test_c8_oracle_equivalence():
    with record("criterion 8 cvp oracle vs reduce for k=4,5", limit=60.0):
        for k in (4, 5):
            s = build_system(k)
            g = generator_set(k)
            c = s.a + 2
            xs = np.array(list(itertools.product(range(-c, c + 1), repeat=4)))
            d3, _ = cvp_distances(xs, s, 3)
            d4, _ = cvp_distances(xs, s, 4)
            assert (d3 == d4).all(), "window 4 improved on window 3"
            assert d3.max() <= k
            dist = bfs_distances(build_circulant(g.n, g.s))
            for x, d in zip(xs.tolist(), d3.tolist()):
                cert = reduce(x, s)
                assert d <= cert.word_length <= k, (x, d, cert.word_length)
                word = word_from_certificate(cert)
                assert replay_word(word, g) == project(x, g)
                assert dist[project(x, g)] <= len(word)


def test_c9_property_suites():
    counts = dict.fromkeys(("betweenness", "homomorphism", "stage1", "centrosymmetry"), 0)
    coord = st.integers(-100, 100)
    v4 = st.tuples(coord, coord, coord, coord)
    cfg = settings(max_examples=1000, deadline=None, database=None)

    frac = st.integers(0, 1000)

    @cfg
    @given(v4, v4, st.tuples(frac, frac, frac, frac))
    def betweenness(x, z, t):
        counts["betweenness"] += 1
        # y is built coordinatewise inside the box spanned by x and z
        y = Vec4(*(xi + (zi - xi) * ti // 1000 for xi, zi, ti in zip(x, z, t)))
        x, z = Vec4(*x), Vec4(*z)
        assert lies_between(x, y, z)
        assert l1_norm(y - x) + l1_norm(z - y) == l1_norm(z - x)

    @cfg
    @given(st.integers(2, 50), v4, v4)
    def homomorphism(k, x, y):
        counts["homomorphism"] += 1
        g = generator_set(k)
        assert project(Vec4(*x) + Vec4(*y), g) == (project(x, g) + project(y, g)) % g.n

    @cfg
    @given(st.integers(4, 30), v4)
    def stage1(k, x):
        counts["stage1"] += 1
        s = build_system(k)
        cap = s.a + 1
        excess = lambda p: sum(max(0, abs(c) - cap) for c in p)  # noqa: E731
        y, moves = stage1_reduce(x, s)
        cur = Vec4(*x)
        for m in moves:
            nxt = cur + s.vec(m)
            assert excess(nxt) < excess(cur)
            cur = nxt
        assert cur == y and max(map(abs, y)) <= cap

    @cfg
    @given(st.integers(4, 30), v4)
    def centrosymmetry(k, x):
        counts["centrosymmetry"] += 1
        s = build_system(k)
        assert reduce(x, s).word_length == reduce(tuple(-c for c in x), s).word_length

    with record("criterion 9 property suites", limit=600.0):
        for fn in (betweenness, homomorphism, stage1, centrosymmetry):
            fn()
        assert min(counts.values()) >= 1000, counts
    RESULTS[-1] += " " + " ".join(f"{k}={v}" for k, v in counts.items())
