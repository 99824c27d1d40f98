"""Spherical and isotropic classes in rank-2 even lattices.

Enumeration is a plain box scan, so it doubles as the brute-force reference
for the reflection recurrences in :func:`spherical_sequences`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError
from .lattice import MukaiVector

__all__ = [
    "HYPERBOLIC",
    "NEGATIVE_SEMI_DEFINITE",
    "NEGATIVE_DEFINITE",
    "INVALID",
    "Rank2Lattice",
    "ClassSequence",
    "ConeCoordinates",
    "classify_rank2",
    "enumerate_square_classes",
    "spherical_sequences",
    "cone_coordinates",
]

HYPERBOLIC = "Hyperbolic"
NEGATIVE_SEMI_DEFINITE = "NegativeSemiDefinite"
NEGATIVE_DEFINITE = "NegativeDefinite"
INVALID = "Invalid"

Pair = tuple[int, int]


@dataclass(frozen=True)
class Rank2Lattice:
    gram: tuple[tuple[int, int], tuple[int, int]]
    basis_vectors: tuple[MukaiVector, MukaiVector] | None = None

    def __post_init__(self) -> None:
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        if len(g) != 2 or any(len(row) != 2 for row in g):
            raise DomainError("rank-2 lattice needs a 2x2 Gram matrix")
        if g[0][1] != g[1][0]:
            raise DomainError("Gram matrix must be symmetric")
        if g[0][0] % 2 or g[1][1] % 2:
            raise DomainError("even lattice violated: odd diagonal entry")
        object.__setattr__(self, "gram", g)

    @classmethod
    def from_entries(cls, a: int, b: int, c: int) -> Rank2Lattice:
        """Gram ``[[a, b], [b, c]]``."""
        return cls(((a, b), (b, c)))

    @classmethod
    def spherical_pair(cls, m: int) -> Rank2Lattice:
        """Span of two spherical classes ``s, t`` with ``(s, t) = m``."""
        return cls(((-2, m), (m, -2)))

    @property
    def determinant(self) -> int:
        g = self.gram
        return g[0][0] * g[1][1] - g[0][1] ** 2

    def pair(self, u: Sequence[int], v: Sequence[int]) -> int:
        g = self.gram
        return (
            u[0] * g[0][0] * v[0]
            + u[0] * g[0][1] * v[1]
            + u[1] * g[1][0] * v[0]
            + u[1] * g[1][1] * v[1]
        )

    def q(self, x: int, y: int) -> int:
        g = self.gram
        return g[0][0] * x * x + 2 * g[0][1] * x * y + g[1][1] * y * y

    def embed(self, coords: Sequence[int]) -> MukaiVector:
        if self.basis_vectors is None:
            raise DomainError("lattice carries no embedding")
        b1, b2 = self.basis_vectors
        return coords[0] * b1 + coords[1] * b2


@dataclass(frozen=True)
class ClassSequence:
    entries: tuple[Pair, ...]
    branch: str  # "upper" or "lower"


@dataclass(frozen=True)
class ConeCoordinates:
    x: Fraction
    y: Fraction

    @property
    def positive(self) -> bool:
        return self.x > 0 and self.y > 0

    def as_tuple(self) -> tuple[Fraction, Fraction]:
        return (self.x, self.y)


def classify_rank2(L: Rank2Lattice) -> str:
    """Sign type of the lattice, read off the determinant and the diagonal.

    Positive (semi)definite or mixed shapes cannot occur inside a Mukai lattice
    of signature ``(2, rho)`` attached to a wall and are reported as Invalid.
    """
    det = L.determinant
    a, c = L.gram[0][0], L.gram[1][1]
    if det < 0:
        return HYPERBOLIC
    if det == 0:
        return NEGATIVE_SEMI_DEFINITE if a <= 0 and c <= 0 else INVALID
    return NEGATIVE_DEFINITE if a < 0 and c < 0 else INVALID


def _sort_key(p: Pair) -> tuple:
    rep = p if p > (0, 0) else (-p[0], -p[1])
    return (rep, p != rep)


def enumerate_square_classes(L: Rank2Lattice, target_square: int, bound: int) -> list[Pair]:
    """All ``(x, y)`` in the box ``|x|, |y| <= bound`` with ``q(x, y) == target_square``.

    Ordered lexicographically by the positive representative of each ``+-``
    pair, positive representative first.  The zero vector is never returned.
    """
    if target_square % 2:
        raise DomainError("target square must be even")
    if bound < 1:
        raise DomainError("bound must be >= 1")
    found = [
        (x, y)
        for x in range(-bound, bound + 1)
        for y in range(-bound, bound + 1)
        if (x or y) and L.q(x, y) == target_square
    ]
    return sorted(found, key=_sort_key)


def spherical_sequences(L: Rank2Lattice, count: int) -> tuple[ClassSequence, ClassSequence]:
    """First ``count`` spherical classes on the upper and lower branches.

    The basis ``s = (1, 0)``, ``t = (0, 1)`` must consist of spherical classes
    with ``m = (s, t) >= 2``.  Upper branch: ``t_1 = t``, ``t_2 = rho_t(s)``,
    ``t_{i+1} = -rho_{t_i}(t_{i-1})``; the lower branch is the mirror image
    starting from ``s_0 = s``.
    """
    if count < 1:
        raise DomainError("count must be positive")
    if L.gram[0][0] != -2 or L.gram[1][1] != -2:
        raise DomainError("basis classes must both be spherical")
    m = L.gram[0][1]
    if m < 2:
        raise DomainError(f"(s, t) = {m} < 2: negative definite span, no infinite branches")

    def rho(delta: Pair, v: Pair) -> Pair:
        k = L.pair(delta, v)
        return (v[0] + k * delta[0], v[1] + k * delta[1])

    def branch(first: Pair, second: Pair) -> tuple[Pair, ...]:
        seq = [first, rho(first, second)]
        while len(seq) < count:
            nxt = rho(seq[-1], seq[-2])
            seq.append((-nxt[0], -nxt[1]))
        return tuple(seq[:count])

    s, t = (1, 0), (0, 1)
    return ClassSequence(branch(t, s), "upper"), ClassSequence(branch(s, t), "lower")


def cone_coordinates(v: Sequence[int] | MukaiVector, L: Rank2Lattice) -> ConeCoordinates:
    """Coordinates of ``v`` in the basis of ``L``.

    A plain integer pair is already in basis coordinates.  A Mukai vector is
    expressed through ``L.basis_vectors`` by solving the rational linear system
    exactly.
    """
    if not isinstance(v, MukaiVector):
        x, y = v
        return ConeCoordinates(Fraction(x), Fraction(y))
    if L.basis_vectors is None:
        raise DomainError("a Mukai vector needs an embedded basis")
    b1, b2 = (b.coords for b in L.basis_vectors)
    target = v.coords
    pivot = None
    for i in range(len(b1)):
        for j in range(i + 1, len(b1)):
            det = b1[i] * b2[j] - b1[j] * b2[i]
            if det:
                pivot = (i, j, det)
                break
        if pivot:
            break
    if pivot is None:
        raise DomainError("embedded basis is linearly dependent")
    i, j, det = pivot
    x = Fraction(target[i] * b2[j] - target[j] * b2[i], det)
    y = Fraction(b1[i] * target[j] - b1[j] * target[i], det)
    if any(x * p + y * q != t for p, q, t in zip(b1, b2, target)):
        raise DomainError("vector is not in the span of the embedded basis")
    return ConeCoordinates(x, y)
