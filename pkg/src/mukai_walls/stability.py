"""Central charges and slopes for sigma_{alpha,beta} on a Picard-rank-one K3.

For ``v = (r, cH, s)`` with ``H^2 = 2d``::

    Z(v) = (v, exp(beta H + i alpha H))
         = d r (alpha^2 - beta^2) + 2 d c beta - s + 2 i d (c - r beta) alpha

Everything is exact: ``alpha`` and ``beta`` are Fractions.  Phases are never
evaluated; the slope ``-Re Z / Im Z`` (``+inf`` when ``Im Z = 0``) carries the
same ordering since ``phase = arccot(slope) / pi``.

Several helpers take ``alpha_sq`` instead of ``alpha``: on a wall the
alpha-coordinate is usually irrational while its square is rational, and
``Re Z`` depends on ``alpha`` only through ``alpha^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import to_fraction
from .errors import DomainError
from .lattice import MukaiVector, NSLattice, mukai_gram

__all__ = [
    "StabParam",
    "ChargeValue",
    "OmegaVector",
    "VCheck",
    "OmegaFlags",
    "central_charge",
    "charge_parts",
    "slope",
    "slopes_equal",
    "in_V_check",
    "omega_predicates",
    "exp_omega",
    "INFINITY",
]

INFINITY = math.inf


@dataclass(frozen=True)
class StabParam:
    d: int
    alpha: Fraction
    beta: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "alpha", to_fraction(self.alpha))
        object.__setattr__(self, "beta", to_fraction(self.beta))
        if self.d < 1:
            raise DomainError("d must be a positive integer")
        if self.alpha <= 0:
            raise DomainError("alpha must be positive")

    @property
    def lattice(self) -> NSLattice:
        return NSLattice.rank_one(self.d)


@dataclass(frozen=True)
class ChargeValue:
    re: Fraction
    im: Fraction

    def __add__(self, other: ChargeValue) -> ChargeValue:
        return ChargeValue(self.re + other.re, self.im + other.im)

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0


def _rank_one_coords(v: MukaiVector, d: int) -> tuple[int, int, int]:
    if not v.lattice.is_rank_one:
        raise DomainError("central charges are defined here for rank-one lattices only")
    if v.lattice.degree != d:
        raise DomainError(f"vector lives on H^2={v.lattice.gram[0][0]}, parameter has d={d}")
    return v.r, v.delta[0], v.s


def charge_parts(d: int, alpha_sq: Fraction, beta: Fraction, r: int, c: int, s: int):
    """``(Re Z, Im Z / alpha)`` as exact rationals."""
    re = d * r * (alpha_sq - beta * beta) + 2 * d * c * beta - s
    im_over_alpha = 2 * d * (c - r * beta)
    return re, im_over_alpha


def central_charge(p: StabParam, v: MukaiVector) -> ChargeValue:
    r, c, s = _rank_one_coords(v, p.d)
    re, im_a = charge_parts(p.d, p.alpha * p.alpha, p.beta, r, c, s)
    return ChargeValue(Fraction(re), Fraction(im_a * p.alpha))


def slope(p: StabParam, v: MukaiVector) -> Fraction | float:
    """``-Re Z / Im Z``, or ``+inf`` when the imaginary part vanishes."""
    z = central_charge(p, v)
    if z.im == 0:
        return INFINITY
    return -z.re / z.im


def slopes_equal(d: int, alpha_sq: Fraction, beta: Fraction, v: MukaiVector, u: MukaiVector) -> bool:
    """Exact slope comparison at a point given by ``alpha^2`` (``alpha > 0``)."""
    rv, cv, sv = _rank_one_coords(v, d)
    ru, cu, su = _rank_one_coords(u, d)
    re_v, im_v = charge_parts(d, alpha_sq, beta, rv, cv, sv)
    re_u, im_u = charge_parts(d, alpha_sq, beta, ru, cu, su)
    if im_v == 0 or im_u == 0:
        return im_v == 0 and im_u == 0
    # -re_v/(im_v*alpha) == -re_u/(im_u*alpha); alpha cancels
    return re_v * im_u == re_u * im_v


@dataclass(frozen=True)
class VCheck:
    """Outcome of the spherical-obstruction scan.

    ``complete`` is True when the bound provably covers every obstruction:
    an obstructing class ``(r, r beta H, s)`` has ``Re Z = d r alpha^2 - 1/r``,
    which is positive once ``r^2 d alpha^2 > 1``.
    """

    in_V: bool
    witness: MukaiVector | None
    bound: int
    complete: bool

    def __bool__(self) -> bool:
        return self.in_V


def in_V_check(p: StabParam, search_bound: int) -> VCheck:
    """Does ``Z`` avoid ``R_{<=0}`` on every spherical class of positive rank?

    Scans ``delta = (r, cH, s)`` with ``1 <= r <= search_bound``.  ``Im Z = 0``
    forces ``c = r beta``; ``delta^2 = -2`` then forces ``s = (d c^2 + 1)/r``.
    """
    if search_bound < 1:
        raise DomainError("search bound must be >= 1")
    lat = p.lattice
    alpha_sq = p.alpha * p.alpha
    for r in range(1, search_bound + 1):
        c = r * p.beta
        if c.denominator != 1:
            continue
        c = int(c)
        num = p.d * c * c + 1
        if num % r:
            continue
        s = num // r
        re, _ = charge_parts(p.d, alpha_sq, p.beta, r, c, s)
        if re <= 0:
            return VCheck(False, MukaiVector(r, (c,), s, lat), search_bound, True)
    complete = search_bound * search_bound * p.d * alpha_sq > 1
    return VCheck(True, None, search_bound, complete)


@dataclass(frozen=True)
class OmegaVector:
    """Vector of ``H*_alg (x) C`` with Gaussian-rational coordinates.

    ``re`` and ``im`` are coordinate tuples in ``(r, delta..., s)`` order.
    """

    re: tuple[Fraction, ...]
    im: tuple[Fraction, ...]
    lattice: NSLattice

    def __post_init__(self) -> None:
        n = self.lattice.rank + 2
        re = tuple(to_fraction(x) for x in self.re)
        im = tuple(to_fraction(x) for x in self.im)
        if len(re) != n or len(im) != n:
            raise DomainError("Omega has the wrong number of coordinates")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def conjugate(self) -> OmegaVector:
        return OmegaVector(self.re, tuple(-x for x in self.im), self.lattice)

    def pair(self, other: OmegaVector | MukaiVector) -> tuple[Fraction, Fraction]:
        """Bilinear (not Hermitian) extension of the Mukai pairing."""
        if isinstance(other, MukaiVector):
            other = OmegaVector(other.coords, (0,) * len(other.coords), other.lattice)
        G = mukai_gram(self.lattice)

        def b(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
            n = len(x)
            return sum((x[i] * G[i][j] * y[j] for i in range(n) for j in range(n)), Fraction(0))

        re = b(self.re, other.re) - b(self.im, other.im)
        im = b(self.re, other.im) + b(self.im, other.re)
        return re, im


def exp_omega(lattice: NSLattice, B: Sequence, omega: Sequence) -> OmegaVector:
    """``exp(B + i omega) = (1, B + i omega, (B + i omega)^2 / 2)``."""
    B = [to_fraction(x) for x in B]
    w = [to_fraction(x) for x in omega]
    BB = sum((B[i] * lattice.gram[i][j] * B[j] for i in range(lattice.rank) for j in range(lattice.rank)), Fraction(0))
    ww = sum((w[i] * lattice.gram[i][j] * w[j] for i in range(lattice.rank) for j in range(lattice.rank)), Fraction(0))
    Bw = sum((B[i] * lattice.gram[i][j] * w[j] for i in range(lattice.rank) for j in range(lattice.rank)), Fraction(0))
    re = (Fraction(1), *B, (BB - ww) / 2)
    im = (Fraction(0), *w, Bw)
    return OmegaVector(re, im, lattice)


@dataclass(frozen=True)
class OmegaFlags:
    inP: bool
    inQ: bool
    inL: bool
    L_bound: int
    L_witness: MukaiVector | None = None


def _spherical_positive_rank(lattice: NSLattice, bound: int):
    """Spherical classes with ``1 <= r <= bound`` and divisor coordinates in ``[-bound, bound]``."""
    from itertools import product

    for r in range(1, bound + 1):
        for delta in product(range(-bound, bound + 1), repeat=lattice.rank):
            dd = lattice.dot(delta, delta)
            # dd - 2 r s = -2
            num = dd + 2
            if num % (2 * r):
                continue
            yield MukaiVector(r, delta, num // (2 * r), lattice)


def omega_predicates(omega: OmegaVector, bound: int = 10) -> OmegaFlags:
    """Membership of ``Omega`` in the sets P, Q and (bounded) L.

    * P: ``Re Omega`` and ``Im Omega`` span a positive definite plane.
    * Q: ``(Omega, Omega) = 0``, ``(Omega, conj Omega) > 0`` and ``r(Omega) = 1``.
    * L: ``(Omega, delta)`` is not in ``R_{<=0}`` for spherical ``delta`` of
      positive rank, scanned up to ``bound``.
    """
    G = mukai_gram(omega.lattice)

    def b(x, y):
        n = len(x)
        return sum((x[i] * G[i][j] * y[j] for i in range(n) for j in range(n)), Fraction(0))

    xx, xy, yy = b(omega.re, omega.re), b(omega.re, omega.im), b(omega.im, omega.im)
    inP = xx > 0 and xx * yy - xy * xy > 0

    oo = omega.pair(omega)
    oob = omega.pair(omega.conjugate())
    inQ = inP and oo == (0, 0) and oob[1] == 0 and oob[0] > 0 and omega.re[0] == 1 and omega.im[0] == 0

    witness = None
    for delta in _spherical_positive_rank(omega.lattice, bound):
        re, im = omega.pair(delta)
        if im == 0 and re <= 0:
            witness = delta
            break
    return OmegaFlags(inP, inQ, witness is None, bound, witness)
