"""Integer 4-vectors under the l1 metric and the two parity families of lattices.

Every quantity here is an exact Python integer. A lattice system bundles the
basis ``v1..v4`` of the lattice ``L_k``, the four derived vectors ``v5..v8``
and the order of the quotient ``Z^4 / L_k``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from math import comb
from typing import NamedTuple, Sequence

__all__ = [
    "Vec4",
    "ZERO",
    "Parity",
    "LatticeSystem",
    "ConstructionError",
    "l1_norm",
    "lies_between",
    "half_param",
    "order_formula",
    "build_system",
    "det4",
    "ball_size",
    "sign_pattern",
    "orthant_signatures",
    "combine",
    "K_CEILING",
]

# BFS verification is hopeless long before this; it only bounds CLI input.
K_CEILING = 10_000


class ConstructionError(RuntimeError):
    """A stored vector disagrees with the combination it is supposed to equal."""


class Vec4(NamedTuple):
    c1: int
    c2: int
    c3: int
    c4: int

    def __add__(self, other):  # type: ignore[override]
        return Vec4(self[0] + other[0], self[1] + other[1], self[2] + other[2], self[3] + other[3])

    def __sub__(self, other):
        return Vec4(self[0] - other[0], self[1] - other[1], self[2] - other[2], self[3] - other[3])

    def __neg__(self):
        return Vec4(-self[0], -self[1], -self[2], -self[3])

    def __mul__(self, m):  # type: ignore[override]
        return Vec4(m * self[0], m * self[1], m * self[2], m * self[3])

    __rmul__ = __mul__

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self) + ")"


ZERO = Vec4(0, 0, 0, 0)


class Parity(enum.Enum):
    EVEN = "E"
    ODD = "O"

    @classmethod
    def of(cls, k: int) -> "Parity":
        return cls.EVEN if k % 2 == 0 else cls.ODD


def l1_norm(x: Sequence[int]) -> int:
    return abs(x[0]) + abs(x[1]) + abs(x[2]) + abs(x[3])


def lies_between(x: Sequence[int], y: Sequence[int], z: Sequence[int]) -> bool:
    """True iff every coordinate of ``y`` lies in the closed interval spanned by ``x`` and ``z``."""
    for xi, yi, zi in zip(x, y, z):
        if xi <= zi:
            if not xi <= yi <= zi:
                return False
        elif not zi <= yi <= xi:
            return False
    return True


def sign_pattern(x: Sequence[int]) -> tuple[int, int, int, int]:
    return tuple((c > 0) - (c < 0) for c in x)  # type: ignore[return-value]


def _check_k(k: int) -> None:
    if not isinstance(k, int) or isinstance(k, bool):
        raise TypeError(f"k must be an int, got {type(k).__name__}")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")


def half_param(k: int) -> int:
    _check_k(k)
    return k // 2 if k % 2 == 0 else (k + 1) // 2


def order_formula(k: int) -> int:
    """Number of vertices of the degree-8 circulant of diameter ``k``."""
    _check_k(k)
    if k % 2 == 0:
        num = k**4 + 2 * k**3 + 6 * k**2 + 4 * k
    else:
        num = k**4 + 2 * k**3 + 6 * k**2 + 6 * k + 1
    q, r = divmod(num, 2)
    if r:
        raise ArithmeticError(f"order numerator {num} is odd for k={k}")
    return q


def det4(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant by cofactor expansion along the first row."""

    def det3(m):
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )

    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise ValueError("det4 needs a 4x4 matrix")
    total = 0
    for j in range(4):
        minor = [[row[c] for c in range(4) if c != j] for row in rows[1:]]
        term = rows[0][j] * det3(minor)
        total += -term if j % 2 else term
    return total


def ball_size(k: int) -> int:
    """Number of points of Z^4 within l1 distance ``k`` of the origin."""
    if k < 0:
        raise ValueError("radius must be non-negative")
    return sum(2**i * comb(4, i) * comb(k, i) for i in range(5))


def _even_vectors(a: int) -> tuple[list[Vec4], list[Vec4]]:
    basis = [
        Vec4(-a - 1, a + 1, a, -a + 1),
        Vec4(a - 1, a + 1, a + 1, -a),
        Vec4(-a - 1, -a + 1, a + 1, -a),
        Vec4(-a, -a, a, a + 1),
    ]
    derived = [
        Vec4(-a, a, a - 1, a + 2),
        Vec4(-a, a, -a - 1, -a),
        Vec4(-a + 1, a - 1, -a - 2, a + 1),
        Vec4(a, a, a, a + 1),
    ]
    return basis, derived


def _odd_vectors(a: int) -> tuple[list[Vec4], list[Vec4]]:
    basis = [
        Vec4(-a + 1, a + 1, -a + 1, a),
        Vec4(a + 1, a + 1, -a + 2, a - 1),
        Vec4(-a - 1, a - 1, a - 1, -a),
        Vec4(-a, a, a, a - 1),
    ]
    derived = [
        Vec4(-a, -a, -a - 1, -a + 2),
        Vec4(a, a, -a + 1, -a),
        Vec4(-a, a, -a, -a + 1),
        Vec4(-a + 1, -a + 1, -a, a + 1),
    ]
    return basis, derived


# v5..v8 as integer combinations of v1..v4
DERIVED_COMBOS: dict[Parity, tuple[tuple[int, int, int, int], ...]] = {
    Parity.EVEN: ((1, 0, -1, 1), (1, -1, 0, -1), (1, -1, -1, 0), (0, 1, -1, 1)),
    Parity.ODD: ((1, -1, 0, -1), (0, 1, 1, -1), (1, 0, 1, -1), (1, -1, -1, 0)),
}


def combine(coeffs: Sequence[int], vectors: Sequence[Vec4]) -> Vec4:
    out = ZERO
    for c, v in zip(coeffs, vectors):
        out = out + v * c
    return out


@dataclass(frozen=True)
class LatticeSystem:
    k: int
    a: int
    parity: Parity
    basis: tuple[Vec4, Vec4, Vec4, Vec4]
    derived: tuple[Vec4, Vec4, Vec4, Vec4]
    order: int

    @property
    def vectors(self) -> tuple[Vec4, ...]:
        """``v1..v8`` in order; ``vectors[i - 1]`` is ``v_i``."""
        return self.basis + self.derived

    def vec(self, signed_index: int) -> Vec4:
        """``+v_i`` for ``signed_index = i`` and ``-v_i`` for ``-i``."""
        v = self.vectors[abs(signed_index) - 1]
        return v if signed_index > 0 else -v

    @property
    def radius(self) -> int:
        return 2 * self.k + 1

    @property
    def has_orthant_cover(self) -> bool:
        """Whether ``+-v1..+-v8`` sit strictly inside the 16 orthants.

        Holds from k=4 (even) and k=5 (odd) on; the base cases k=2, 3 have
        zero coordinates among the eight vectors.
        """
        return self.a >= (2 if self.parity is Parity.EVEN else 3)


def build_system(k: int) -> LatticeSystem:
    a = half_param(k)
    parity = Parity.of(k)
    if parity is Parity.EVEN:
        basis, derived = _even_vectors(a)
    else:
        basis, derived = _odd_vectors(a)
    for i, (coeffs, stored) in enumerate(zip(DERIVED_COMBOS[parity], derived), start=5):
        rebuilt = combine(coeffs, basis)
        if rebuilt != stored:
            raise ConstructionError(f"v{i} stored as {stored} but combination gives {rebuilt} (k={k})")
    return LatticeSystem(
        k=k,
        a=a,
        parity=parity,
        basis=tuple(basis),  # type: ignore[arg-type]
        derived=tuple(derived),  # type: ignore[arg-type]
        order=order_formula(k),
    )


def orthant_signatures(sys: LatticeSystem) -> set[tuple[int, ...]]:
    """Sign patterns of the sixteen vectors ``+-v_i``."""
    pats = set()
    for v, s in itertools.product(sys.vectors, (1, -1)):
        pats.add(sign_pattern(v * s))
    return pats
