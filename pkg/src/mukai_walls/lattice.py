"""Algebraic Mukai lattice of a K3 surface.

Coordinates are ordered ``(r, delta_1, ..., delta_rho, s)``.  The pairing is
``(v, w) = delta_v . delta_w - r_v s_w - r_w s_v`` where the divisor product
uses the Gram matrix of the Neron-Severi lattice.  All arithmetic is on Python
integers, so nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .arith import gcd_all
from .errors import DomainError, LatticeMismatchError

__all__ = [
    "NSLattice",
    "MukaiVector",
    "Isometry",
    "mukai_pairing",
    "square",
    "tensor_by_divisor",
    "basic_autoequivalence_action",
    "reflect",
    "verify_isometry",
    "mukai_gram",
    "shift_isometry",
    "tensor_isometry",
    "twist_isometry",
    "dual_isometry",
    "reflection_isometry",
    "identity_isometry",
    "SHIFT",
    "SPHERICAL_TWIST_O",
    "DUAL",
]

SHIFT = "Shift"
SPHERICAL_TWIST_O = "SphericalTwistO"
DUAL = "Dual"


@dataclass(frozen=True)
class NSLattice:
    """Even lattice of algebraic divisor classes."""

    gram: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        n = len(gram)
        if n == 0 or any(len(row) != n for row in gram):
            raise DomainError("Gram matrix must be square and non-empty")
        for i in range(n):
            for j in range(i):
                if gram[i][j] != gram[j][i]:
                    raise DomainError("Gram matrix must be symmetric")
            if gram[i][i] % 2:
                raise DomainError("even lattice violated: odd diagonal entry")
        labels = tuple(self.labels) or tuple(f"e{i}" for i in range(n))
        if len(labels) != n:
            raise DomainError("one label per basis class is required")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def rank_one(cls, d: int) -> NSLattice:
        """``Z H`` with ``H^2 = 2d``."""
        if d < 1:
            raise DomainError("degree parameter d must be >= 1")
        return cls(((2 * d,),), ("H",))

    @classmethod
    def elliptic(cls, labels: tuple[str, str] = ("s", "f")) -> NSLattice:
        """Hyperbolic plane of an elliptic K3 with a section: s^2=-2, s.f=1, f^2=0."""
        return cls(((-2, 1), (1, 0)), labels)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_rank_one(self) -> bool:
        return self.rank == 1

    @property
    def is_elliptic(self) -> bool:
        return self.gram == ((-2, 1), (1, 0))

    @property
    def degree(self) -> int:
        """``d`` with ``H^2 = 2d`` for a rank-one lattice."""
        if not self.is_rank_one:
            raise DomainError("degree is defined for rank-one lattices only")
        return self.gram[0][0] // 2

    def dot(self, a: Sequence[int], b: Sequence[int]) -> int:
        g = self.gram
        return sum(a[i] * g[i][j] * b[j] for i in range(len(a)) for j in range(len(b)))

    def is_ample(self, delta: Sequence[int]) -> bool:
        """Ampleness for the two supported shapes.

        Rank one: positive multiple of ``H``.  Elliptic ``U``: ``a s + b f`` with
        ``a > 0`` and ``b > 2a``.
        """
        if self.is_rank_one:
            return delta[0] > 0 and self.gram[0][0] > 0
        if self.is_elliptic:
            a, b = delta
            return a > 0 and b > 2 * a
        raise DomainError("ampleness is only decided for rank-one and elliptic lattices")

    def ample_class(self) -> tuple[int, ...]:
        """A fixed ample class used for twisting."""
        if self.is_rank_one:
            return (1,)
        if self.is_elliptic:
            return (1, 3)
        raise DomainError("no canonical ample class for this lattice")


@dataclass(frozen=True)
class MukaiVector:
    r: int
    delta: tuple[int, ...]
    s: int
    lattice: NSLattice = field(compare=True)

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "s", int(self.s))
        object.__setattr__(self, "delta", tuple(int(x) for x in self.delta))
        if len(self.delta) != self.lattice.rank:
            raise DomainError(
                f"delta has {len(self.delta)} coordinates, lattice rank is {self.lattice.rank}"
            )

    @classmethod
    def from_coords(cls, coords: Sequence[int], lattice: NSLattice) -> MukaiVector:
        coords = list(coords)
        return cls(coords[0], tuple(coords[1:-1]), coords[-1], lattice)

    @property
    def coords(self) -> tuple[int, ...]:
        return (self.r, *self.delta, self.s)

    @property
    def square(self) -> int:
        return mukai_pairing(self, self)

    @property
    def is_primitive(self) -> bool:
        return gcd_all(self.coords) == 1

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: MukaiVector) -> None:
        if self.lattice != other.lattice:
            raise LatticeMismatchError("vectors live over different lattices")

    def __add__(self, other: MukaiVector) -> MukaiVector:
        self._check(other)
        return MukaiVector.from_coords([a + b for a, b in zip(self.coords, other.coords)], self.lattice)

    def __sub__(self, other: MukaiVector) -> MukaiVector:
        return self + (-other)

    def __neg__(self) -> MukaiVector:
        return MukaiVector.from_coords([-a for a in self.coords], self.lattice)

    def __mul__(self, k: int) -> MukaiVector:
        return MukaiVector.from_coords([k * a for a in self.coords], self.lattice)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return f"({self.r}, {list(self.delta)}, {self.s})"


def mukai_gram(lattice: NSLattice) -> list[list[int]]:
    """Gram matrix of the full Mukai lattice in ``(r, delta..., s)`` coordinates."""
    n = lattice.rank + 2
    G = [[0] * n for _ in range(n)]
    for i in range(lattice.rank):
        for j in range(lattice.rank):
            G[i + 1][j + 1] = lattice.gram[i][j]
    G[0][n - 1] = G[n - 1][0] = -1
    return G


def mukai_pairing(v: MukaiVector, w: MukaiVector) -> int:
    if v.lattice != w.lattice:
        raise LatticeMismatchError("vectors live over different lattices")
    return v.lattice.dot(v.delta, w.delta) - v.r * w.s - w.r * v.s


def square(v: MukaiVector) -> int:
    return mukai_pairing(v, v)


def tensor_by_divisor(v: MukaiVector, D: Sequence[int]) -> MukaiVector:
    """Multiply by ``exp(D) = (1, D, D^2/2)``."""
    lat = v.lattice
    D = tuple(int(x) for x in D)
    if len(D) != lat.rank:
        raise DomainError("divisor has the wrong number of coordinates")
    d_sq = lat.dot(D, D)
    delta = tuple(a + v.r * b for a, b in zip(v.delta, D))
    s = v.r * d_sq // 2 + lat.dot(v.delta, D) + v.s
    return MukaiVector(v.r, delta, s, lat)


def basic_autoequivalence_action(v: MukaiVector, kind: str) -> MukaiVector:
    if kind == SHIFT:
        return -v
    if kind == SPHERICAL_TWIST_O:
        return MukaiVector(-v.s, v.delta, -v.r, v.lattice)
    if kind == DUAL:
        return MukaiVector(v.r, tuple(-x for x in v.delta), v.s, v.lattice)
    raise DomainError(f"unknown autoequivalence {kind!r}")


def reflect(v: MukaiVector, delta: MukaiVector) -> MukaiVector:
    """Reflection ``v + (delta, v) delta`` in a spherical class."""
    if square(delta) != -2:
        raise DomainError(f"reflection needs a spherical class, got square {square(delta)}")
    return v + mukai_pairing(delta, v) * delta


def _matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    n, m, p = len(A), len(B), len(B[0])
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(m)) for j in range(p)) for i in range(n)
    )


def _transpose(A: Sequence[Sequence[int]]) -> list[list[int]]:
    return [list(col) for col in zip(*A)]


@dataclass(frozen=True)
class Isometry:
    """Integer matrix acting on Mukai coordinates, with the word that produced it.

    ``anti`` marks anti-autoequivalences (an odd number of ``Dual`` letters).
    ``target`` is the lattice of the image when it differs from ``lattice``.
    """

    matrix: tuple[tuple[int, ...], ...]
    word: tuple[str, ...]
    lattice: NSLattice
    anti: bool = False
    target: NSLattice | None = None

    @property
    def codomain(self) -> NSLattice:
        return self.target or self.lattice

    def __call__(self, v: MukaiVector) -> MukaiVector:
        if v.lattice != self.lattice:
            raise LatticeMismatchError("isometry applied to a vector over another lattice")
        x = v.coords
        y = [sum(row[j] * x[j] for j in range(len(x))) for row in self.matrix]
        return MukaiVector.from_coords(y, self.codomain)

    def then(self, other: Isometry) -> Isometry:
        """``other`` applied after ``self``."""
        if other.lattice != self.codomain:
            raise LatticeMismatchError("cannot compose isometries over different lattices")
        return Isometry(
            _matmul(other.matrix, self.matrix),
            self.word + other.word,
            self.lattice,
            self.anti != other.anti,
            other.target,
        )

    @property
    def determinant(self) -> int:
        from sympy import Matrix

        return int(Matrix(self.matrix).det())


def identity_isometry(lattice: NSLattice) -> Isometry:
    n = lattice.rank + 2
    return Isometry(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), (), lattice)


def shift_isometry(lattice: NSLattice) -> Isometry:
    n = lattice.rank + 2
    return Isometry(tuple(tuple(-int(i == j) for j in range(n)) for i in range(n)), (SHIFT,), lattice)


def twist_isometry(lattice: NSLattice) -> Isometry:
    n = lattice.rank + 2
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    M[0][0] = M[n - 1][n - 1] = 0
    M[0][n - 1] = M[n - 1][0] = -1
    return Isometry(tuple(map(tuple, M)), (SPHERICAL_TWIST_O,), lattice)


def dual_isometry(lattice: NSLattice) -> Isometry:
    n = lattice.rank + 2
    M = [[0] * n for _ in range(n)]
    M[0][0] = M[n - 1][n - 1] = 1
    for i in range(1, n - 1):
        M[i][i] = -1
    return Isometry(tuple(map(tuple, M)), (DUAL,), lattice, anti=True)


def tensor_isometry(lattice: NSLattice, D: Sequence[int]) -> Isometry:
    D = tuple(int(x) for x in D)
    rho = lattice.rank
    n = rho + 2
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    for i in range(rho):
        M[i + 1][0] = D[i]
    GD = [sum(lattice.gram[i][j] * D[j] for j in range(rho)) for i in range(rho)]
    M[n - 1][0] = lattice.dot(D, D) // 2
    for i in range(rho):
        M[n - 1][i + 1] = GD[i]
    return Isometry(tuple(map(tuple, M)), (f"TensorBy({','.join(map(str, D))})",), lattice)


def reflection_isometry(delta: MukaiVector) -> Isometry:
    if square(delta) != -2:
        raise DomainError("reflection needs a spherical class")
    lat = delta.lattice
    G = mukai_gram(lat)
    d = delta.coords
    n = len(d)
    Gd = [sum(G[i][j] * d[j] for j in range(n)) for i in range(n)]
    M = tuple(tuple(int(i == j) + d[i] * Gd[j] for j in range(n)) for i in range(n))
    return Isometry(M, (f"Reflect({','.join(map(str, d))})",), lat)


def verify_isometry(M: Isometry | Sequence[Sequence[int]], lattice: NSLattice | None = None) -> bool:
    """True iff ``M^T G M == G`` for the Mukai Gram matrix ``G``.

    When the isometry maps between two lattices the target Gram is used on the
    left-hand side.
    """
    if isinstance(M, Isometry):
        matrix, src, dst = M.matrix, M.lattice, M.codomain
    else:
        if lattice is None:
            raise DomainError("a lattice is required for a bare matrix")
        matrix, src, dst = tuple(map(tuple, M)), lattice, lattice
    G_src = mukai_gram(src)
    G_dst = mukai_gram(dst)
    n = len(G_src)
    if len(matrix) != len(G_dst) or any(len(row) != n for row in matrix):
        return False
    lhs = _matmul(_matmul(_transpose(matrix), G_dst), matrix)
    return lhs == tuple(map(tuple, G_src))


def compose(isometries: Iterable[Isometry]) -> Isometry:
    """Left-to-right composition (first element applied first)."""
    it = iter(isometries)
    result = next(it)
    for iso in it:
        result = result.then(iso)
    return result
