"""The isomorphism Z^4 / L_k -> Z_n and the generator sets it induces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .lattice_core import (
    LatticeSystem,
    Parity,
    Vec4,
    combine,
    det4,
    order_formula,
)

__all__ = [
    "GeneratorSet",
    "ComboIdentity",
    "CyclicReport",
    "generator_set",
    "combo_identities",
    "project",
    "verify_cyclic",
]


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError(f"{what}: {num} is not divisible by {den}")
    return q


@dataclass(frozen=True)
class GeneratorSet:
    n: int
    s: tuple[int, int, int, int]

    def __post_init__(self):
        n, s = self.n, self.s
        if s[0] != 1:
            raise ValueError(f"first generator must be 1, got {s[0]}")
        for i, x in enumerate(s):
            if not 0 < x < n:
                raise ValueError(f"generator {x} outside 1..{n - 1}")
            if (2 * x) % n == 0:
                raise ValueError(f"generator {x} is an involution in Z_{n}")
            for y in s[i + 1 :]:
                if (x - y) % n == 0 or (x + y) % n == 0:
                    raise ValueError(f"generators {x} and {y} coincide up to sign in Z_{n}")

    def __iter__(self):
        return iter(self.s)


def generator_set(k: int) -> GeneratorSet:
    n = order_formula(k)
    if k % 2 == 0:
        s2 = _exact_div(k**3 + 2 * k**2 + 6 * k + 2, 2, "s2")
        s3 = _exact_div(k**4 + 4 * k**2 - 8 * k, 4, "s3")
        s4 = _exact_div(k**4 + 4 * k**2 - 4 * k, 4, "s4")
    else:
        s2 = _exact_div(k**3 + k**2 + 5 * k + 3, 2, "s2")
        s3 = _exact_div(k**4 + 2 * k**2 - 8 * k - 11, 4, "s3")
        s4 = _exact_div(k**4 + 2 * k**2 - 4 * k - 7, 4, "s4")
    return GeneratorSet(n, (1, s2 % n, s3 % n, s4 % n))


@dataclass(frozen=True)
class ComboIdentity:
    name: str
    coefficients: tuple[int, int, int, int]
    expected: Vec4
    actual: Vec4 = field(compare=False)

    @property
    def holds(self) -> bool:
        return self.actual == self.expected

    @property
    def constant(self) -> int:
        return self.expected[0]


def _combo_table(a: int, parity: Parity):
    # (coefficients of v1..v4, right-hand side)
    if parity is Parity.EVEN:
        return [
            (
                (-(2 * a**2 + 2 * a + 1), 2 * a**2 + a + 2, -(a + 2), 1),
                Vec4(4 * a**3 + 4 * a**2 + 6 * a + 1, -1, 0, 0),
            ),
            (
                (-(2 * a**3 - 1), 2 * a**3 - a**2 + 2 * a - 2, -(a**2 + a - 1), a - 1),
                Vec4(4 * a**4 + 4 * a**2 - 4 * a, 0, -1, 0),
            ),
            (
                (-2 * a**3, 2 * a**3 - a**2 + 2 * a - 1, -(a**2 + a - 1), a - 1),
                Vec4(4 * a**4 + 4 * a**2 - 2 * a, 0, 0, -1),
            ),
        ]
    # Odd coefficients solved exactly against the odd basis; the right-hand
    # sides are the ones that fix the generator set.
    return [
        (
            (-(2 * a**2 - 3 * a + 2), 2 * a**2 - 2 * a + 1, -a, -1),
            Vec4(4 * a**3 - 4 * a**2 + 6 * a - 1, -1, 0, 0),
        ),
        (
            (-(2 * a**3 - 5 * a**2 + 4 * a - 2), 2 * a**3 - 4 * a**2 + 2 * a - 1, -(a**2 - a - 1), -(a - 1)),
            Vec4(4 * a**4 - 8 * a**3 + 8 * a**2 - 8 * a, 0, -1, 0),
        ),
        (
            (-(2 * a**3 - 5 * a**2 + 4 * a - 1), 2 * a**3 - 4 * a**2 + 2 * a, -(a**2 - a - 1), -(a - 1)),
            Vec4(4 * a**4 - 8 * a**3 + 8 * a**2 - 6 * a, 0, 0, -1),
        ),
    ]


def combo_identities(sys: LatticeSystem) -> list[ComboIdentity]:
    """The three combinations of ``v1..v4`` that express ``e2, e3, e4`` through ``e1``."""
    out = []
    for name, (coeffs, rhs) in zip(("e2", "e3", "e4"), _combo_table(sys.a, sys.parity)):
        out.append(ComboIdentity(name, coeffs, rhs, combine(coeffs, sys.basis)))
    return out


def project(x: Sequence[int], sys: LatticeSystem | GeneratorSet) -> int:
    """Image of ``x`` in Z_n: ``x1*s1 + x2*s2 + x3*s3 + x4*s4 mod n``."""
    gens = sys if isinstance(sys, GeneratorSet) else generator_set(sys.k)
    s = gens.s
    return (x[0] * s[0] + x[1] * s[1] + x[2] * s[2] + x[3] * s[3]) % gens.n


@dataclass
class CyclicReport:
    is_cyclic: bool
    order: int
    failures: list[str] = field(default_factory=list)


def verify_cyclic(sys: LatticeSystem) -> CyclicReport:
    """Check that Z^4 / L_k is cyclic of order ``L(8,k)``, generated by ``e1``.

    ``|det| = n`` fixes the index; the three identities put ``e2, e3, e4`` in
    the subgroup generated by ``e1`` modulo the lattice.
    """
    n = order_formula(sys.k)
    d = abs(det4(sys.basis))
    failures = []
    if d != n:
        failures.append(f"determinant: |det| = {d} but L(8,{sys.k}) = {n}")
    gens = generator_set(sys.k)
    for ident, s in zip(combo_identities(sys), gens.s[1:]):
        if not ident.holds:
            failures.append(f"identity {ident.name}: expands to {ident.actual}, expected {ident.expected}")
        elif (ident.constant - s) % n:
            failures.append(f"identity {ident.name}: constant {ident.constant} != generator {s} mod {n}")
    return CyclicReport(not failures, d, failures)
