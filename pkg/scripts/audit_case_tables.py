"""Audit the stage-2 case tables and search for replacements of failing rules.

For each rule, every point of its guard that lies in the orthant but not
between 0 and the orthant vector is pushed through the rule's moves, for
several values of k of the rule's parity. Rules whose endpoint leaves the
anchor box are reported.  With ``--suggest`` the script searches chains of at
most ``--depth`` lattice vectors plus an anchor that work on every point of
the guard, splitting the guard along one variable when no single chain does.

    python3 scripts/audit_case_tables.py
    python3 scripts/audit_case_tables.py --suggest --depth 3
"""

from __future__ import annotations

import argparse
import itertools
from dataclasses import dataclass

import numpy as np

from circulant8.lattice_core import Parity, build_system, lies_between, ZERO
from circulant8.reduction_engine import Bound, Range, load_rules, CaseRule

EVEN_KS = tuple(range(4, 25, 2))
ODD_KS = tuple(range(5, 26, 2))


@dataclass
class Box:
    """Symbolic guard: one Range per variable r, s, t, u, plus a range of a."""

    ranges: tuple[Range, Range, Range, Range]
    a_range: tuple = (0, None)

    def has_a(self, a):
        lo, hi = self.a_range
        return lo <= a and (hi is None or a <= hi)

    def at(self, a):
        return [r.at(a) for r in self.ranges]


def domain_points(parity: Parity, orthant: int, box: Box):
    """Per k: (system, array of x) for the points a rule must handle."""
    out = []
    for k in EVEN_KS if parity is Parity.EVEN else ODD_KS:
        sys = build_system(k)
        if not box.has_a(sys.a):
            continue
        v = sys.vectors[orthant - 1]
        sigma = np.sign(np.array(v))
        bounds = box.at(sys.a)
        if any(lo > hi for lo, hi in bounds):
            continue
        grid = np.array(list(itertools.product(*[range(lo, hi + 1) for lo, hi in bounds])))
        xs = grid * sigma
        vv = np.array(v)
        lo, hi = np.minimum(0, vv), np.maximum(0, vv)
        inside = np.all((xs >= lo) & (xs <= hi), axis=1)
        xs = xs[~inside]
        if len(xs):
            out.append((sys, xs))
    return out


def _between(p, e):
    lo, hi = np.minimum(0, e), np.maximum(0, e)
    return np.all((p >= lo) & (p <= hi), axis=1)


def chain_ok(pts, chain, anchor) -> bool:
    for sys, xs in pts:
        shift = np.zeros(4, dtype=np.int64)
        for m in chain:
            shift += np.array(sys.vec(m))
        if not _between(xs + shift, np.array(sys.vec(anchor))).all():
            return False
    return True


def anchors_for(pts, chain):
    return [j * s for j in range(1, 9) for s in (1, -1) if chain_ok(pts, chain, j * s)]


def chains(depth, prefix=()):
    idx = [s * j for j in range(1, 9) for s in (1, -1)]
    yield prefix
    for d in range(1, depth + 1):
        for combo in itertools.combinations_with_replacement(idx, d):
            if any(-m in combo for m in combo):
                continue
            yield prefix + combo


def solve(parity, orthant, box: Box, prefer, depth):
    pts = domain_points(parity, orthant, box)
    if not pts:
        return []
    seen = set()
    candidates = [tuple(prefer)] + [tuple(prefer) + (m,) for m in (s * j for j in range(1, 9) for s in (1, -1))]
    candidates += list(chains(depth))
    for ch in candidates:
        key = tuple(sorted(ch))
        if key in seen:
            continue
        seen.add(key)
        an = anchors_for(pts, ch)
        if an:
            return [(box, ch, an[0])]
    return None


def split_solve(parity, orthant, box: Box, prefer, depth, budget=3):
    sol = solve(parity, orthant, box, prefer, depth)
    if sol is not None or budget == 0:
        return sol
    best = None
    lo, hi = box.a_range
    amin = 2 if parity is Parity.EVEN else 3
    lo = max(lo, amin)
    if hi is None and lo < amin + 2:
        # peel off the smallest a and retry
        parts = []
        for ar in ((lo, lo), (lo + 1, None)):
            s = split_solve(parity, orthant, Box(box.ranges, ar), prefer, depth, budget - 1)
            if s is None:
                break
            parts.extend(s)
        else:
            best = parts
    for v in range(4):
        r = box.ranges[v]
        if r.lo == r.hi:
            continue
        for lo_part, hi_part in (
            (Range(r.lo, r.lo), Range(Bound(r.lo.uses_a, r.lo.const + 1), r.hi)),
            (Range(r.lo, Bound(r.hi.uses_a, r.hi.const - 1)), Range(r.hi, r.hi)),
        ):
            parts = []
            for piece in (lo_part, hi_part):
                rs = list(box.ranges)
                rs[v] = piece
                s = split_solve(parity, orthant, Box(tuple(rs), box.a_range), prefer, depth, budget - 1)
                if s is None:
                    break
                parts.extend(s)
            else:
                if best is None or len(parts) < len(best):
                    best = parts
    return best


def fmt_signed(m):
    return ("+" if m > 0 else "-") + f"v{abs(m)}"


def fmt_box(box: Box):
    out = " ".join(f"{n}={r}" for n, r in zip("rstu", box.ranges))
    lo, hi = box.a_range
    if (lo, hi) != (0, None):
        out += f" a={lo}" if lo == hi else f" a={lo}..{'' if hi is None else hi}"
    return out


def rule_box(rule: CaseRule) -> Box:
    rs = []
    for base, ref in zip(rule.base, rule.refine):
        rs.append(ref if ref is not None else base)
    return Box(tuple(rs), rule.a_range)


def audit(rules, suggest, depth):
    bad = 0
    for rule in rules:
        box = rule_box(rule)
        pts = domain_points(rule.parity, rule.orthant, box)
        if not pts or chain_ok(pts, rule.moves, rule.anchor):
            continue
        bad += 1
        moves = ",".join(fmt_signed(m) for m in rule.moves) or "."
        print(f"FAIL {rule.case_id}: {fmt_box(box)} : {moves} : {fmt_signed(rule.anchor)}")
        if suggest:
            sol = split_solve(rule.parity, rule.orthant, box, rule.moves, depth)
            if sol is None:
                print("    no replacement found")
            branch = rule.case_id.split(".")[1].lstrip("0123456789")
            for n, (b, ch, an) in enumerate(sol or [], start=1):
                label = branch if len(sol) == 1 else f"{branch}{n}"
                print(f"  {label} : {fmt_box(b)} : {','.join(fmt_signed(m) for m in ch) or '.'} : {fmt_signed(an)}")
    print(f"{bad} failing rule(s) of {len(rules)}")
    return bad


def derive_box(text: str, depth: int) -> int:
    from circulant8.reduction_engine import FULL, _parse_guard

    parity, orthant, *guard = text.split()
    g, a_rng = _parse_guard(" ".join(guard), "--box")
    box = Box(tuple(g.get(v, FULL) for v in "rstu"), a_rng)
    sol = split_solve(Parity(parity), int(orthant), box, (), depth)
    if sol is None:
        print("no rule set found")
        return 1
    for n, (b, ch, an) in enumerate(sol, start=1):
        print(f"  x{n} : {fmt_box(b)} : {','.join(fmt_signed(m) for m in ch) or '.'} : {fmt_signed(an)}")
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--suggest", action="store_true")
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--only", help="comma-separated rule ids")
    ap.add_argument("--box", help='derive rules for a guard, e.g. "O 5 r=0 s=1..a"')
    args = ap.parse_args(argv)
    if args.box:
        return derive_box(args.box, args.depth)
    rules = load_rules()
    if args.only:
        want = set(args.only.split(","))
        rules = [r for r in rules if r.case_id in want]
    return 1 if audit(rules, args.suggest, args.depth) else 0


if __name__ == "__main__":
    raise SystemExit(main())
