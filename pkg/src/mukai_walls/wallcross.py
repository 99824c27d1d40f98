"""The rank-2 lattice attached to a wall and the numerical wall-crossing types.

``H`` is the set of integral classes ``w`` whose central charge is real-proportional
to that of ``v``, i.e. the kernel of the rational linear form
``w -> Im(Z(w) * conj(Z(v)))``.  On ``(r, c, s)``-space this kernel has rank
two and is saturated.

Wall kinds, for ``v`` in ``H``:

* ``v^2 = -2``: two spherical classes ``s, t`` with ``v`` a positive
  combination, ``m = (s, t)`` equal to 2 (semi-definite) or at least 3.
* ``v^2 = 0`` and ``H`` semi-definite: ``v = s + t`` with ``(s, t) = 2``.
* ``v^2 = 0`` and ``H`` hyperbolic: a unique spherical class up to sign,
  normalized so that ``a = -(s, v) > 0``; then ``w = v - a s`` is isotropic
  with ``(s, w) = a`` and the wall is totally semistable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

from .arith import egcd, gcd_all, integer_kernel, smith_invariants
from .classes import (
    HYPERBOLIC,
    NEGATIVE_DEFINITE,
    NEGATIVE_SEMI_DEFINITE,
    Rank2Lattice,
    classify_rank2,
    cone_coordinates,
    enumerate_square_classes,
)
from .errors import ConsistencyError, DomainError, UnresolvedError
from .lattice import MukaiVector, mukai_pairing
from .stability import StabParam, central_charge

__all__ = [
    "SPHERICAL_PAIR",
    "ISOTROPIC_SEMI_DEFINITE",
    "ISOTROPIC_HYPERBOLIC",
    "HILBERT_CHOW",
    "UNCLASSIFIED",
    "WallLattice",
    "WallKind",
    "JHData",
    "wall_lattice_basis",
    "classify_wall_kind",
    "isotropic_jh_data",
]

SPHERICAL_PAIR = "SphericalPair"
ISOTROPIC_SEMI_DEFINITE = "IsotropicSemiDefinite"
ISOTROPIC_HYPERBOLIC = "IsotropicHyperbolic"
HILBERT_CHOW = "HilbertChow"
UNCLASSIFIED = "Unclassified"

Pair = tuple[int, int]


@dataclass(frozen=True)
class WallLattice(Rank2Lattice):
    classification: str = ""

    @classmethod
    def from_basis(cls, b1: MukaiVector, b2: MukaiVector) -> WallLattice:
        gram = (
            (mukai_pairing(b1, b1), mukai_pairing(b1, b2)),
            (mukai_pairing(b2, b1), mukai_pairing(b2, b2)),
        )
        tmp = Rank2Lattice(gram)
        return cls(gram, (b1, b2), classify_rank2(tmp))

    @property
    def basis(self) -> tuple[MukaiVector, MukaiVector]:
        return self.basis_vectors

    @property
    def saturation_index(self) -> int:
        """Product of Smith invariants of the basis matrix; 1 iff primitive."""
        rows = [b.coords for b in self.basis_vectors]
        inv = smith_invariants(rows)
        out = 1
        for x in inv:
            out *= x
        return out

    def contains(self, v: MukaiVector) -> bool:
        try:
            xy = cone_coordinates(v, self)
        except DomainError:
            return False
        return xy.x.denominator == 1 and xy.y.denominator == 1


@dataclass(frozen=True)
class WallKind:
    """Numerical wall type; class data are coordinate pairs in the basis of ``H``."""

    tag: str
    s: Pair | None = None
    t: Pair | None = None
    m: int | None = None
    a: int | None = None
    w: Pair | None = None
    # autoequivalences that may realize the crossing; the exponent depends on
    # phases, which this layer does not see
    twist_options: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class JHData:
    s: Pair
    a: int
    w: Pair
    checks: tuple[tuple[str, bool], ...]
    totally_semistable: bool = True
    filtration: str = "S^a is a subobject or a quotient (orientation needs a chamber)"


def _linear_form(p: StabParam, v: MukaiVector) -> list[int]:
    """Integer coefficients of ``w -> Im(Z(w) conj Z(v))`` on ``(r, c, s)``."""
    z = central_charge(p, v)
    if z.is_zero:
        raise DomainError("Z(v) = 0: not a stability parameter for v")
    a, b, d = p.alpha, p.beta, p.d
    # Z(w) = re_w + i im_w, linear in (r, c, s)
    re_w = (d * (a * a - b * b), 2 * d * b, Fraction(-1))
    im_w = (-2 * d * b * a, 2 * d * a, Fraction(0))
    coeffs = [z.re * im_w[i] - z.im * re_w[i] for i in range(3)]
    den = lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    g = gcd_all(ints)
    return [x // g for x in ints] if g else ints


def wall_lattice_basis(p: StabParam, v: MukaiVector) -> WallLattice:
    """Saturated rank-2 lattice of classes aligned with ``v`` at ``p``.

    When ``v`` is primitive the returned basis starts with ``v`` itself.
    """
    if not v.lattice.is_rank_one:
        raise DomainError("wall lattices are built on rank-one lattices")
    form = _linear_form(p, v)
    kernel = integer_kernel(form)
    if len(kernel) != 2:
        raise DomainError("Im(Z(-) conj Z(v)) vanishes identically")
    k1, k2 = (MukaiVector.from_coords(k, v.lattice) for k in kernel)
    H = WallLattice.from_basis(k1, k2)
    xy = cone_coordinates(v, H)
    if xy.x.denominator != 1 or xy.y.denominator != 1:
        raise ConsistencyError("v is not an integral combination of the kernel basis")
    x, y = int(xy.x), int(xy.y)
    g = gcd_all((x, y))
    if g == 1:
        # extend v to a basis: x q - y p = 1
        q, mp, _ = egcd(x, -y)  # x*q + (-y)*mp = 1
        other = mp * k1 + q * k2
        H = WallLattice.from_basis(v, other)
    if H.saturation_index != 1:
        raise ConsistencyError("wall lattice basis is not saturated")
    return H


def _coords_of(v, H: Rank2Lattice) -> Pair:
    xy = cone_coordinates(v, H)
    if xy.x.denominator != 1 or xy.y.denominator != 1:
        raise DomainError("vector is not in the lattice")
    return int(xy.x), int(xy.y)


def _solve_positive(v: Pair, s: Pair, t: Pair) -> tuple[int, int] | None:
    """Integers ``x, y > 0`` with ``v = x s + y t``, if any."""
    det = s[0] * t[1] - s[1] * t[0]
    if det == 0:
        return None
    xn = v[0] * t[1] - v[1] * t[0]
    yn = s[0] * v[1] - s[1] * v[0]
    if xn % det or yn % det:
        return None
    x, y = xn // det, yn // det
    return (x, y) if x > 0 and y > 0 else None


def _size(p: Pair) -> tuple:
    return (max(abs(p[0]), abs(p[1])), p)


def classify_wall_kind(H: Rank2Lattice, v, bound: int = 50) -> WallKind:
    """Numerical type of the wall with lattice ``H`` for the class ``v``.

    ``v`` is a coordinate pair in the basis of ``H`` or, when ``H`` carries an
    embedding, a Mukai vector.
    """
    x = _coords_of(v, H)
    sq = H.q(*x)
    kind = classify_rank2(H)
    if sq > 0:
        if H.basis_vectors is not None:
            point = MukaiVector(0, (0,) * H.basis_vectors[0].lattice.rank, 1, H.basis_vectors[0].lattice)
            if isinstance(H, WallLattice) and H.contains(point):
                return WallKind(HILBERT_CHOW)
        return WallKind(UNCLASSIFIED)
    if sq not in (-2, 0):
        raise DomainError(f"v^2 = {sq}: only spherical and isotropic classes are classified")
    if kind == NEGATIVE_DEFINITE:
        raise DomainError("negative definite lattice carries no wall")
    if kind not in (HYPERBOLIC, NEGATIVE_SEMI_DEFINITE):
        raise DomainError(f"lattice of type {kind} cannot come from a wall")

    spherical = enumerate_square_classes(H, -2, bound)

    if sq == -2:
        best = None
        for i, s in enumerate(spherical):
            for t in spherical:
                m = H.pair(s, t)
                if m < 2 or s == t:
                    continue
                if _solve_positive(x, s, t) is None:
                    continue
                key = (m, _size(s), _size(t))
                if best is None or key < best[0]:
                    best = (key, s, t, m)
        if best is None:
            raise UnresolvedError("no spherical pair with v in its positive cone", bound)
        _, s, t, m = best
        expected_m2 = kind == NEGATIVE_SEMI_DEFINITE
        if expected_m2 != (m == 2):
            raise ConsistencyError(f"(s, t) = {m} contradicts a {kind} lattice")
        return WallKind(SPHERICAL_PAIR, s=s, t=t, m=m, twist_options=("ST_S", "ST_T"))

    if kind == NEGATIVE_SEMI_DEFINITE:
        best = None
        for s in spherical:
            t = (x[0] - s[0], x[1] - s[1])
            if H.q(*t) != -2 or H.pair(s, t) != 2:
                continue
            key = (not (min(s) >= 0 and min(t) >= 0), _size(s), _size(t))
            if best is None or key < best[0]:
                best = (key, s, t)
        if best is None:
            raise UnresolvedError("no spherical decomposition v = s + t", bound)
        _, s, t = best
        return WallKind(ISOTROPIC_SEMI_DEFINITE, s=s, t=t, m=2, twist_options=("ST_S",))

    reps = {p if p > (0, 0) else (-p[0], -p[1]) for p in spherical}
    if not reps:
        raise UnresolvedError("no spherical class in the hyperbolic lattice", bound)
    if len(reps) > 1:
        raise ConsistencyError("hyperbolic lattice with an isotropic class has two spherical classes")
    s = reps.pop()
    a = -H.pair(s, x)
    if a < 0:
        s, a = (-s[0], -s[1]), -a
    if a == 0:
        raise ConsistencyError("(s, v) = 0 would make H negative semi-definite")
    w = (x[0] - a * s[0], x[1] - a * s[1])
    return WallKind(ISOTROPIC_HYPERBOLIC, s=s, a=a, w=w, twist_options=("ST_S^2", "ST_S^-2"))


def isotropic_jh_data(H: Rank2Lattice, v, bound: int = 50) -> JHData:
    """Jordan-Holder numerics ``v = a s + w`` on a totally semistable isotropic wall."""
    x = _coords_of(v, H)
    if H.q(*x) != 0:
        raise DomainError(f"v^2 = {H.q(*x)} != 0: not an isotropic class")
    kind = classify_wall_kind(H, x, bound)
    if kind.tag != ISOTROPIC_HYPERBOLIC:
        raise DomainError(f"wall kind is {kind.tag}, not {ISOTROPIC_HYPERBOLIC}")
    s, a, w = kind.s, kind.a, kind.w
    checks = (
        ("a_equals_minus_s_dot_v", a == -H.pair(s, x)),
        ("w_equals_v_minus_a_s", w == (x[0] - a * s[0], x[1] - a * s[1])),
        ("w_isotropic", H.q(*w) == 0),
        ("s_dot_w_equals_a", H.pair(s, w) == a),
        ("s_spherical", H.q(*s) == -2),
        ("v_square_identity", -2 * a * a + 2 * a * H.pair(s, w) == 0),
    )
    if not all(ok for _, ok in checks):
        raise ConsistencyError(f"isotropic wall identities failed: {checks}")
    return JHData(s, a, w, checks)
