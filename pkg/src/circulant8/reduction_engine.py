"""Constructive reduction of a point of Z^4 to a lattice point within distance k.

The pipeline has two stages. Stage 1 subtracts sign-matched lattice vectors
until every coordinate has absolute value at most ``a+1``. Stage 2 looks the
point up in a per-orthant rule table; each rule applies a short chain of
lattice vectors and claims that the result lies between 0 and some ``+-v_j``.
Since ``|v_j|_1 = 2k+1``, such a point is within distance k of 0 or of
``+-v_j``.

The rule tables live in ``case_tables.txt`` as data and are interpreted here.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Optional, Sequence

from .lattice_core import (
    ZERO,
    LatticeSystem,
    Parity,
    Vec4,
    l1_norm,
    lies_between,
    sign_pattern,
)
from .quotient_iso import generator_set, project

__all__ = [
    "ReductionError",
    "NoMatchingCase",
    "AnchorViolation",
    "TableFormatError",
    "Range",
    "CaseRule",
    "Certificate",
    "ORIGIN",
    "load_rules",
    "parse_rules",
    "rules_for",
    "canonical_orthant",
    "stage1_reduce",
    "between_anchor",
    "stage2_resolve",
    "reduce",
    "word_from_certificate",
    "format_word",
    "replay_word",
    "supports",
]

ORIGIN = 0  # anchor value meaning "the origin"
VARS = ("r", "s", "t", "u")


class ReductionError(RuntimeError):
    pass


class NoMatchingCase(ReductionError):
    """A point of an orthant escaped every guard of that orthant's table."""


class AnchorViolation(ReductionError):
    """A rule fired but its endpoint is not between 0 and the claimed anchor."""


class TableFormatError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rule table

_BOUND_RE = re.compile(r"^(?:(-?\d+)|a([+-]\d+)?)$")


@dataclass(frozen=True)
class Bound:
    """``a_coeff * a + const`` with ``a_coeff`` in {0, 1}."""

    uses_a: bool
    const: int

    @classmethod
    def parse(cls, text: str) -> "Bound":
        m = _BOUND_RE.match(text)
        if not m:
            raise TableFormatError(f"bad bound {text!r}")
        if m.group(1) is not None:
            return cls(False, int(m.group(1)))
        return cls(True, int(m.group(2) or 0))

    def at(self, a: int) -> int:
        return (a if self.uses_a else 0) + self.const

    def __str__(self) -> str:
        if not self.uses_a:
            return str(self.const)
        if self.const == 0:
            return "a"
        return f"a{self.const:+d}"


@dataclass(frozen=True)
class Range:
    lo: Bound
    hi: Bound

    @classmethod
    def parse(cls, text: str) -> "Range":
        if ".." in text:
            lo, hi = text.split("..", 1)
            return cls(Bound.parse(lo), Bound.parse(hi))
        b = Bound.parse(text)
        return cls(b, b)

    def at(self, a: int) -> tuple[int, int]:
        return self.lo.at(a), self.hi.at(a)

    def __str__(self) -> str:
        return str(self.lo) if self.lo == self.hi else f"{self.lo}..{self.hi}"


FULL = Range(Bound(False, 0), Bound(True, 1))


@dataclass(frozen=True)
class CaseRule:
    orthant: int
    parity: Parity
    case_id: str  # e.g. "E1.3f": parity, orthant, case number, branch
    base: tuple[Range, Range, Range, Range]
    refine: tuple[Optional[Range], ...]
    moves: tuple[int, ...]
    anchor: int
    a_range: tuple[int, Optional[int]] = (0, None)  # rule only applies for these a

    def applies_at(self, a: int) -> bool:
        lo, hi = self.a_range
        return lo <= a and (hi is None or a <= hi)

    def bounds(self, a: int) -> tuple[tuple[int, int], ...]:
        """Guard intervals for r, s, t, u at this ``a`` (base intersected with refinement)."""
        out = []
        for base, ref in zip(self.base, self.refine):
            lo, hi = base.at(a)
            if ref is not None:
                rlo, rhi = ref.at(a)
                lo, hi = max(lo, rlo), min(hi, rhi)
            out.append((lo, hi))
        return tuple(out)

    def guard_text(self) -> str:
        parts = []
        lo, hi = self.a_range
        if (lo, hi) != (0, None):
            parts.append(f"a={lo}" if lo == hi else f"a={lo}..{'' if hi is None else hi}")
        for name, base, ref in zip(VARS, self.base, self.refine):
            parts.append(f"{name}={ref if ref is not None else base}")
        return " ".join(parts)


_A_RANGE_RE = re.compile(r"^(\d+)(?:\.\.(\d*))?$")


def _parse_a_range(text: str, where: str) -> tuple[int, Optional[int]]:
    m = _A_RANGE_RE.match(text)
    if not m:
        raise TableFormatError(f"{where}: bad range for a {text!r}")
    lo = int(m.group(1))
    if m.group(2) is None:
        return lo, lo
    return lo, int(m.group(2)) if m.group(2) else None


def _parse_guard(text: str, where: str) -> tuple[dict[str, Range], tuple[int, Optional[int]]]:
    out: dict[str, Range] = {}
    a_range: tuple[int, Optional[int]] = (0, None)
    for tok in text.split():
        name, sep, rng = tok.partition("=")
        if name == "a" and sep:
            a_range = _parse_a_range(rng, where)
            continue
        if not sep or name not in VARS:
            raise TableFormatError(f"{where}: bad guard token {tok!r}")
        if name in out:
            raise TableFormatError(f"{where}: {name} constrained twice")
        out[name] = Range.parse(rng)
    return out, a_range


def _parse_moves(text: str, where: str) -> tuple[int, ...]:
    text = text.strip()
    if text == ".":
        return ()
    return tuple(_parse_signed(m, where) for m in text.split(","))


def _parse_signed(text: str, where: str) -> int:
    m = re.fullmatch(r"\s*([+-])v([1-8])\s*", text)
    if not m:
        raise TableFormatError(f"{where}: bad vector reference {text!r}")
    i = int(m.group(2))
    return i if m.group(1) == "+" else -i


def parse_rules(text: str) -> list[CaseRule]:
    rules: list[CaseRule] = []
    base: Optional[tuple[Range, ...]] = None
    head = None
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        where = f"line {lineno}"
        if line.lstrip().startswith("case "):
            lhs, sep, guard = line.lstrip()[5:].partition(":")
            fields = lhs.split()
            if not sep or len(fields) != 3 or fields[0] not in ("E", "O"):
                raise TableFormatError(f"{where}: bad case header")
            orthant, case_no = int(fields[1]), int(fields[2])
            if not 1 <= orthant <= 8:
                raise TableFormatError(f"{where}: orthant {orthant} out of range")
            g, a_rng = _parse_guard(guard, where)
            if a_rng != (0, None):
                raise TableFormatError(f"{where}: a-ranges belong on rule lines")
            base = tuple(g.get(v, FULL) for v in VARS)
            head = (Parity(fields[0]), orthant, case_no)
            continue
        if head is None or base is None:
            raise TableFormatError(f"{where}: rule before any case header")
        parts = [p.strip() for p in line.split(":")]
        if len(parts) != 4:
            raise TableFormatError(f"{where}: expected 'branch : guard : moves : anchor'")
        branch, guard, moves, anchor = parts
        parity, orthant, case_no = head
        case_id = f"{parity.value}{orthant}.{case_no}{branch}"
        if case_id in seen:
            raise TableFormatError(f"{where}: duplicate rule {case_id}")
        seen.add(case_id)
        g, a_rng = _parse_guard(guard, where)
        rules.append(
            CaseRule(
                orthant=orthant,
                parity=parity,
                case_id=case_id,
                base=base,  # type: ignore[arg-type]
                refine=tuple(g.get(v) for v in VARS),
                moves=_parse_moves(moves, where),
                anchor=_parse_signed(anchor, where),
                a_range=a_rng,
            )
        )
    return rules


@lru_cache(maxsize=None)
def load_rules() -> tuple[CaseRule, ...]:
    text = resources.files(__package__).joinpath("case_tables.txt").read_text()
    return tuple(parse_rules(text))


@dataclass(frozen=True)
class _Compiled:
    rule: CaseRule
    lo: tuple[int, int, int, int]
    hi: tuple[int, int, int, int]
    shift: Vec4  # sum of the move vectors
    anchor: Vec4


@lru_cache(maxsize=64)
def _compiled(parity: Parity, a: int, sys: LatticeSystem) -> dict[int, tuple[_Compiled, ...]]:
    table: dict[int, list[_Compiled]] = {i: [] for i in range(1, 9)}
    for rule in load_rules():
        if rule.parity is not parity or not rule.applies_at(a):
            continue
        b = rule.bounds(a)
        shift = ZERO
        for m in rule.moves:
            shift = shift + sys.vec(m)
        table[rule.orthant].append(
            _Compiled(rule, tuple(x[0] for x in b), tuple(x[1] for x in b), shift, sys.vec(rule.anchor))  # type: ignore[arg-type]
        )
    return {i: tuple(v) for i, v in table.items()}


def rules_for(sys: LatticeSystem, orthant: Optional[int] = None) -> list[CaseRule]:
    table = _compiled(sys.parity, sys.a, sys)
    keys = [orthant] if orthant is not None else range(1, 9)
    return [c.rule for i in keys for c in table[i]]


# ---------------------------------------------------------------------------
# certificates


@dataclass
class Certificate:
    input: Vec4
    stage1_moves: list[int] = field(default_factory=list)
    stage2_case: Optional[str] = None
    stage2_moves: list[int] = field(default_factory=list)
    anchor: int = ORIGIN
    residual: Vec4 = ZERO
    word_length: int = 0
    negated: bool = False  # stage 2 ran on -x; its moves are stored already un-negated

    def all_moves(self) -> list[int]:
        return self.stage1_moves + self.stage2_moves

    def lattice_point(self, sys: LatticeSystem) -> Vec4:
        """The certified ``w``: anchor endpoint minus every move that was added."""
        w = sys.vec(self.anchor) if self.anchor != ORIGIN else ZERO
        for m in self.all_moves():
            w = w - sys.vec(m)
        return w

    def check(self, sys: LatticeSystem) -> list[str]:
        """Soundness problems with this certificate; empty when it is valid."""
        problems = []
        w = self.lattice_point(sys)
        if self.input - w != self.residual:
            problems.append(f"residual {self.residual} != input - w = {self.input - w}")
        if l1_norm(self.residual) != self.word_length:
            problems.append(f"word_length {self.word_length} != |residual| {l1_norm(self.residual)}")
        if self.word_length > sys.k:
            problems.append(f"word_length {self.word_length} exceeds k={sys.k}")
        if project(w, generator_set(sys.k)) != 0:
            problems.append(f"w = {w} does not project to 0")
        return problems


def _anchor_certificate(x: Vec4, p: Vec4, anchor: int, sys: LatticeSystem) -> tuple[int, Vec4]:
    """Choose origin or anchor for a point ``p`` between them; return (anchor, p - endpoint)."""
    if l1_norm(p) <= sys.k:
        return ORIGIN, p
    return anchor, p - sys.vec(anchor)


# ---------------------------------------------------------------------------
# stage 1


def _compatible(x: Sequence[int], v: Sequence[int], cap: int) -> bool:
    for xc, vc in zip(x, v):
        if xc > 0:
            if vc <= 0:
                return False
        elif xc < 0:
            if vc >= 0:
                return False
        elif abs(vc) > cap:
            return False
    return True


@lru_cache(maxsize=64)
def _stage1_table(sys: LatticeSystem) -> dict[tuple[int, ...], int]:
    """Sign pattern of x -> signed index of the vector stage 1 adds.

    The subtracted vector is chosen among ``+-v1..+-v8`` to match the sign of every
    nonzero coordinate; where x has a zero coordinate the vector's coordinate
    there must have absolute value at most ``a+1``. Ties go to the first
    candidate in the order v1, -v1, v2, -v2, ...
    """
    out = {}
    for pat in itertools.product((-1, 0, 1), repeat=4):
        if pat == (0, 0, 0, 0):
            continue
        for i in range(1, 9):
            for s in (1, -1):
                # x has signs `pat`; we subtract a vector of the same signs,
                # i.e. add -(s v_i). Record the added index.
                if _compatible(pat, sys.vec(s * i), sys.a + 1):
                    out[pat] = -s * i
                    break
            if pat in out:
                break
    return out


def _excess(x: Sequence[int], cap: int) -> int:
    return sum(max(0, abs(c) - cap) for c in x)


def stage1_reduce(x: Sequence[int], sys: LatticeSystem) -> tuple[Vec4, list[int]]:
    """Shrink ``x`` by lattice vectors until every ``|coordinate| <= a+1``.

    Returns the reduced point and the signed indices that were added.
    """
    x = Vec4(*x)
    cap = sys.a + 1
    table = _stage1_table(sys)
    moves: list[int] = []
    limit = l1_norm(x) + 8
    excess = _excess(x, cap)
    while excess:
        if len(moves) >= limit:
            raise ReductionError(f"stage 1 did not terminate within {limit} steps from {x}")
        m = table.get(sign_pattern(x))
        if m is None:
            raise ReductionError(f"no sign-compatible vector for {x}")
        x = x + sys.vec(m)
        moves.append(m)
        new = _excess(x, cap)
        if __debug__ and new >= excess:
            raise AssertionError(f"stage 1 excess did not drop at {x} ({excess} -> {new})")
        excess = new
    return x, moves


# ---------------------------------------------------------------------------
# orthant dispatch


def canonical_orthant(x: Sequence[int], sys: LatticeSystem) -> tuple[int, bool]:
    """First ``+-v_i`` whose orthant contains ``x``, scanning v1..v8 and then -v1..-v8."""
    for negated in (False, True):
        for i, v in enumerate(sys.vectors, start=1):
            if _same_orthant(x, -v if negated else v):
                return i, negated
    raise ReductionError(f"no orthant representative for {tuple(x)}")


def _same_orthant(x: Sequence[int], v: Sequence[int]) -> bool:
    for xc, vc in zip(x, v):
        if (xc > 0 and vc < 0) or (xc < 0 and vc > 0):
            return False
    return True


def between_anchor(x: Sequence[int], sys: LatticeSystem) -> Optional[Certificate]:
    x = Vec4(*x)
    if x == ZERO:
        return Certificate(input=x)
    for i, v in enumerate(sys.vectors, start=1):
        for s in (1, -1):
            if lies_between(ZERO, x, v * s):
                anchor, residual = _anchor_certificate(x, x, s * i, sys)
                return Certificate(input=x, anchor=anchor, residual=residual, word_length=l1_norm(residual))
    return None


def _match(x: Vec4, orthant: int, sys: LatticeSystem) -> _Compiled:
    sigma = sign_pattern(sys.vectors[orthant - 1])
    vals = tuple(sg * c for sg, c in zip(sigma, x))
    if min(vals) < 0:
        raise ValueError(f"{x} is not in the orthant of v{orthant}")
    for c in _compiled(sys.parity, sys.a, sys)[orthant]:
        if all(lo <= v <= hi for v, lo, hi in zip(vals, c.lo, c.hi)):
            return c
    raise NoMatchingCase(
        f"k={sys.k} orthant v{orthant}: x={x} (r,s,t,u)={vals} matches no rule"
    )


def supports(sys: LatticeSystem) -> bool:
    return sys.has_orthant_cover


def stage2_resolve(x: Sequence[int], orthant: int, sys: LatticeSystem) -> Certificate:
    """Resolve a bounded point of the orthant of ``v_orthant`` through its rule table."""
    if not supports(sys):
        raise ValueError(f"no case tables for k={sys.k}; use exhaustive search")
    x = Vec4(*x)
    c = _match(x, orthant, sys)
    p = x + c.shift
    if not lies_between(ZERO, p, c.anchor):
        raise AnchorViolation(
            f"k={sys.k} rule {c.rule.case_id}: x={x} moves to {p}, "
            f"not between 0 and {'+' if c.rule.anchor > 0 else '-'}v{abs(c.rule.anchor)}={c.anchor}"
        )
    anchor, residual = _anchor_certificate(x, p, c.rule.anchor, sys)
    return Certificate(
        input=x,
        stage2_case=c.rule.case_id,
        stage2_moves=list(c.rule.moves),
        anchor=anchor,
        residual=residual,
        word_length=l1_norm(residual),
    )


def reduce(x: Sequence[int], sys: LatticeSystem) -> Certificate:
    """Certify a lattice point within distance k of ``x``."""
    if not supports(sys):
        raise ValueError(
            f"reduction tables need k >= 4 (even) or k >= 5 (odd), got k={sys.k}"
        )
    x = Vec4(*x)
    y, moves1 = stage1_reduce(x, sys)
    cert = between_anchor(y, sys)
    if cert is None:
        i, negated = canonical_orthant(y, sys)
        cert = stage2_resolve(-y if negated else y, i, sys)
        if negated:
            cert.stage2_moves = [-m for m in cert.stage2_moves]
            cert.anchor = -cert.anchor
            cert.residual = -cert.residual
            cert.negated = True
    cert.input = x
    cert.stage1_moves = moves1
    return cert


# ---------------------------------------------------------------------------
# words


def word_from_certificate(cert: Certificate, sys: LatticeSystem | None = None) -> tuple[int, ...]:
    """Flat list of signed generator steps: ``+i`` is one step by ``s_i``, ``-i`` its inverse."""
    steps = []
    for i, c in enumerate(cert.residual, start=1):
        steps.extend([i if c > 0 else -i] * abs(c))
    return tuple(steps)


def format_word(word: Iterable[int]) -> str:
    return ", ".join(f"{'+' if s > 0 else '-'}s{abs(s)}" for s in word)


def replay_word(word: Iterable[int], gens, start: int = 0) -> int:
    n, s = gens.n, gens.s
    g = start
    for step in word:
        g = (g + (s[step - 1] if step > 0 else -s[-step - 1])) % n
    return g
