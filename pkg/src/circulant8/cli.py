"""Command-line entry point: ``circulant8 <command> -k K ...``.

Exit status is 0 when a command succeeds or a check passes, 1 when a check
fails and 2 on bad usage.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from typing import Optional, Sequence

from .graph_verify import build_circulant, diameter, distance_profile, verify_case_coverage, verify_covering
from .lattice_core import K_CEILING, ball_size, build_system, det4, l1_norm, order_formula
from .quotient_iso import generator_set, verify_cyclic
from .reduction_engine import format_word, reduce, replay_word, supports, word_from_certificate

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
EXPORT_CEILING = 20
FULL_CEILING = 8


class UsageError(Exception):
    pass


def _k(text: str) -> int:
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"k must be an integer, got {text!r}")
    if not 2 <= k <= K_CEILING:
        raise argparse.ArgumentTypeError(f"k must be in 2..{K_CEILING}, got {k}")
    return k


def cmd_gen(args, out) -> int:
    g = generator_set(args.k)
    print(f"n={g.n} gens={','.join(map(str, g.s))}", file=out)
    return EXIT_OK


def cmd_diameter(args, out) -> int:
    g = generator_set(args.k)
    prof = distance_profile(build_circulant(g.n, g.s))
    print(f"n={g.n} diameter={prof.diameter} profile={','.join(map(str, prof.histogram))}", file=out)
    if prof.diameter != args.k:
        print(f"finding: diameter {prof.diameter} differs from k={args.k}", file=out)
    return EXIT_OK if prof.diameter <= args.k else EXIT_FAIL


def _route_word(k: int, g: int) -> tuple[int, ...]:
    gens = generator_set(k)
    sys_ = build_system(k)
    if supports(sys_):
        x = (g if g <= gens.n - g else g - gens.n, 0, 0, 0)
        return word_from_certificate(reduce(x, sys_))
    # base cases have no tables; search words by increasing length
    for length in range(k + 1):
        for combo in itertools.combinations_with_replacement((1, -1, 2, -2, 3, -3, 4, -4), length):
            if replay_word(combo, gens) == g:
                return tuple(combo)
    raise RuntimeError(f"no word of length <= {k} reaches {g}")


def cmd_route(args, out) -> int:
    gens = generator_set(args.k)
    if not 0 <= args.g < gens.n:
        raise UsageError(f"g must be in 0..{gens.n - 1}, got {args.g}")
    word = _route_word(args.k, args.g)
    end = replay_word(word, gens)
    if end != args.g or len(word) > args.k:
        print(f"internal error: word {format_word(word)} replays to {end}, length {len(word)}", file=sys.stderr)
        return EXIT_FAIL
    print(f"word={format_word(word)}", file=out)
    print(f"length={len(word)}", file=out)
    return EXIT_OK


def _fast_checks(k: int) -> list[tuple[str, bool, str]]:
    s = build_system(k)
    n = order_formula(k)
    checks = []
    d = det4(s.basis)
    checks.append(("determinant", abs(d) == n, f"|det|={abs(d)} n={n}"))
    cyc = verify_cyclic(s)
    checks.append(("identities", cyc.is_cyclic, "; ".join(cyc.failures) or "3 identities hold"))
    norms = [l1_norm(v) for v in s.vectors]
    checks.append(("l1_norms", all(m == s.radius for m in norms), f"norms={norms}"))
    checks.append(("ball_bound", ball_size(k) >= n, f"|S_k|={ball_size(k)} n={n}"))
    g = generator_set(k)
    try:
        build_circulant(g.n, g.s)
        checks.append(("generators", True, f"gens={','.join(map(str, g.s))}"))
    except ValueError as e:
        checks.append(("generators", False, str(e)))
    return checks


def _full_checks(k: int) -> list[tuple[str, bool, str]]:
    g = generator_set(k)
    checks = []
    dia = diameter(build_circulant(g.n, g.s))
    checks.append(("bfs_diameter", dia <= k, f"diameter={dia}"))
    cov = verify_covering(k)
    checks.append(("covering", cov.ok, cov.to_kv() if cov.ok else cov.failures[0]))
    if supports(build_system(k)):
        cc = verify_case_coverage(k)
        checks.append(("case_coverage", cc.ok, cc.to_kv() if cc.ok else cc.findings[0]))
    return checks


def cmd_verify(args, out) -> int:
    if args.level == "full" and args.k > FULL_CEILING:
        raise UsageError(f"--level full is limited to k <= {FULL_CEILING}")
    checks = _fast_checks(args.k)
    if args.level == "full":
        checks += _full_checks(args.k)
    failed = [name for name, ok, _ in checks if not ok]
    if args.json:
        doc = {
            "k": args.k,
            "level": args.level,
            "status": "fail" if failed else "pass",
            "first_failure": failed[0] if failed else None,
            "checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in checks],
        }
        print(json.dumps(doc, indent=2), file=out)
    else:
        for name, ok, detail in checks:
            print(f"{'pass' if ok else 'FAIL'} {name}: {detail}", file=out)
        print(f"status={'fail' if failed else 'pass'}" + (f" first_failure={failed[0]}" if failed else ""), file=out)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_coverage(args, out) -> int:
    if not supports(build_system(args.k)):
        raise UsageError("case tables start at k=4 (even) and k=5 (odd)")
    rep = verify_case_coverage(args.k)
    print(rep.to_kv(), file=out)
    for f in rep.findings:
        print(f"finding: {f}", file=out)
    for case_id in sorted(rep.hits):
        print(f"hits {case_id} {rep.hits[case_id]}", file=out)
    for case_id in rep.unused_rules:
        print(f"unused {case_id}", file=out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def edge_list(k: int) -> str:
    g = generator_set(k)
    n = g.n
    edges = set()
    for u in range(n):
        for s in g.s:
            v = (u + s) % n
            edges.add((u, v) if u < v else (v, u))
    lines = [f"# circulant n={n} steps={','.join(map(str, g.s))}"]
    lines += [f"{u} {v}" for u, v in sorted(edges)]
    return "\n".join(lines) + "\n"


def cmd_export(args, out) -> int:
    if args.k > EXPORT_CEILING:
        raise UsageError(f"export is limited to k <= {EXPORT_CEILING}")
    text = edge_list(args.k)
    try:
        with open(args.output, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    except OSError as e:
        print(f"{e}", file=sys.stderr)
        return EXIT_FAIL
    print(f"wrote {text.count(chr(10)) - 1} edges to {args.output}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circulant8", description="Degree-8 circulant graphs of diameter k.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("-k", type=_k, required=True)
        sp.set_defaults(fn=fn)
        return sp

    add("gen", cmd_gen, "print n and the generator set")
    add("diameter", cmd_diameter, "BFS diameter and distance profile")
    sp = add("route", cmd_route, "word of at most k steps reaching residue g")
    sp.add_argument("-g", type=int, required=True)
    sp = add("verify", cmd_verify, "run the fast or full check suite")
    sp.add_argument("--level", choices=("fast", "full"), default="fast")
    sp.add_argument("--json", action="store_true")
    add("coverage", cmd_coverage, "sweep the rule tables over the bounded box")
    sp = add("export", cmd_export, "write the edge list")
    sp.add_argument("-o", "--output", required=True)
    return p


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.fn(args, out)
    except UsageError as e:
        print(f"{parser.prog}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
