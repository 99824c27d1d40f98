"""Walls for the Hilbert-scheme vector ``v = (1, 0, 1-n)`` on ``Pic = Z H``, ``H^2 = 2d``.

A destabilizing class is first moved to rank zero, ``u = (0, cH, s)``.  Its
numerical wall is::

    c d (alpha^2 + beta^2) - beta s + c (n - 1) = 0

i.e. a semicircle centred at ``s / (2cd)`` with radius squared
``(s / 2cd)^2 - (n-1)/d``; ``c = 0`` gives the vertical wall ``beta = 0``.
All such circles belong to one coaxial pencil, which is why they nest.

On the line ``beta = -1/k`` the imaginary part ``Im Z(r, cH, s) = 2 d alpha
(ck + r) / k`` is quantized and ``v`` attains the smallest positive value, so
no wall can pass through a point of that line that lies in ``V(X)``.  This is
the engine of :func:`certify_no_walls`.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable

from .errors import ConsistencyError, DomainError
from .lattice import DUAL, MukaiVector, NSLattice, basic_autoequivalence_action
from .stability import charge_parts, slopes_equal

__all__ = [
    "SEMICIRCLE",
    "VERTICAL",
    "LEFT",
    "RIGHT",
    "MEETS_WALL_FREE_LINE",
    "FAILS_HYPERBOLICITY",
    "NON_POSITIVE_RADIUS",
    "Wall",
    "Contradiction",
    "NoWallCertificate",
    "hilbert_vector",
    "normalize_rank_zero",
    "wall_from_destabilizer",
    "hyperbolicity_test",
    "line_meets_wall",
    "line_filter_threshold",
    "enumerate_candidate_walls",
    "certify_no_walls",
    "walls_cross",
    "worker_count",
]

SEMICIRCLE = "semicircle"
VERTICAL = "vertical"
LEFT = "left"
RIGHT = "right"

MEETS_WALL_FREE_LINE = "MeetsWallFreeLine"
FAILS_HYPERBOLICITY = "FailsHyperbolicity"
NON_POSITIVE_RADIUS = "NonPositiveRadius"


def worker_count() -> int:
    """Worker cap from ``MUKAI_WALLS_THREADS`` (default 1)."""
    raw = os.environ.get("MUKAI_WALLS_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def hilbert_vector(d: int, n: int) -> MukaiVector:
    return MukaiVector(1, (0,), 1 - n, NSLattice.rank_one(d))


def _rank_zero_parts(u: MukaiVector) -> tuple[int, int]:
    if not u.lattice.is_rank_one:
        raise DomainError("walls are computed on rank-one lattices")
    if u.r != 0:
        raise DomainError(f"destabilizer must have rank 0, got r={u.r}")
    return u.delta[0], u.s


@dataclass(frozen=True)
class Wall:
    """A numerical wall for ``for_vector``.

    ``classes`` lists every enumerated rank-zero class defining the same
    circle; ``destabilizer`` is the first of them.
    """

    shape: str
    destabilizer: MukaiVector
    for_vector: MukaiVector
    center: Fraction | None = None
    radius_sq: Fraction | None = None
    beta: Fraction | None = None
    classes: tuple[MukaiVector, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        if self.destabilizer.r != 0:
            raise ConsistencyError("destabilizer is not rank-zero normalized")
        if self.shape == SEMICIRCLE:
            if self.radius_sq is None or self.center is None or self.radius_sq <= 0:
                raise ConsistencyError("semicircle needs a centre and a positive radius")
        elif self.shape == VERTICAL:
            if self.beta is None:
                raise ConsistencyError("vertical wall needs a beta coordinate")
        else:
            raise DomainError(f"unknown wall shape {self.shape!r}")
        if not self.classes:
            object.__setattr__(self, "classes", (self.destabilizer,))
        alpha_sq, beta = self.sample_point()
        d = self.for_vector.lattice.degree
        if not slopes_equal(d, alpha_sq, beta, self.for_vector, self.destabilizer):
            raise ConsistencyError("slopes of v and destabilizer differ on the wall")

    def sample_point(self) -> tuple[Fraction, Fraction]:
        """``(alpha^2, beta)`` of a point on the wall (the top of a semicircle)."""
        if self.shape == SEMICIRCLE:
            return self.radius_sq, self.center
        return Fraction(1), self.beta

    @property
    def key(self) -> tuple:
        if self.shape == SEMICIRCLE:
            return (SEMICIRCLE, self.center, self.radius_sq)
        return (VERTICAL, self.beta)

    def dual(self) -> Wall:
        """Mirror image under ``beta -> -beta`` (derived dual)."""
        classes = tuple(basic_autoequivalence_action(u, DUAL) for u in self.classes)
        if self.shape == SEMICIRCLE:
            return Wall(SEMICIRCLE, classes[0], self.for_vector, -self.center, self.radius_sq, classes=classes)
        return Wall(VERTICAL, classes[0], self.for_vector, beta=-self.beta, classes=classes)


def normalize_rank_zero(u: MukaiVector, v: MukaiVector) -> MukaiVector:
    """Replace ``u`` by a rank-zero class on the same numerical wall.

    ``r(u) > 0``: ``r v - u``; ``r(u) < 0``: ``-r v + u``; rank zero is kept.
    """
    if v.r != 1:
        raise DomainError("reference vector must have rank 1")
    if u.r == 0:
        return u
    if u.r > 0:
        return u.r * v - u
    return (-u.r) * v + u


def wall_from_destabilizer(d: int, n: int, u: MukaiVector) -> Wall | None:
    """Wall of ``(1, 0, 1-n)`` cut out by the rank-zero class ``u``; None when empty."""
    c, s = _rank_zero_parts(u)
    if u.lattice.degree != d:
        raise DomainError("destabilizer lives on a different lattice")
    v = hilbert_vector(d, n)
    if c == 0:
        return Wall(VERTICAL, u, v, beta=Fraction(0))
    center = Fraction(s, 2 * c * d)
    radius_sq = center * center - Fraction(n - 1, d)
    if radius_sq <= 0:
        return None
    return Wall(SEMICIRCLE, u, v, center, radius_sq)


def hyperbolicity_test(d: int, n: int, u: MukaiVector) -> bool:
    """``s^2 > 4 d (n-1) c^2``: the Gram matrix of ``(v, u)`` has negative determinant."""
    c, s = _rank_zero_parts(u)
    return s * s > 4 * d * (n - 1) * c * c


def line_meets_wall(n: int, k: int, u: MukaiVector) -> bool:
    """Does the wall of ``u`` reach ``beta = -1/k`` at some ``alpha > 0`` (``d = k^2 (n-1)``)?

    Substituting gives ``c k^2 (n-1) alpha^2 = -s/k - 2(n-1)c``.
    """
    c, s = _rank_zero_parts(u)
    if c <= 0 or s >= 0:
        raise DomainError("left-quadrant destabilizers have c > 0 and s < 0")
    if u.lattice.degree != k * k * (n - 1):
        raise DomainError("line test assumes d = k^2 (n-1)")
    return Fraction(s, k) + 2 * (n - 1) * c < 0


def _line_coefficient(d: int, n: int, k: int) -> Fraction:
    """``g(k)`` such that the wall of ``(0, cH, s)`` crosses ``beta = -1/k`` inside ``V(X)`` iff ``s < -c g(k)``.

    The crossing point has ``alpha^2 = (-s/k - c(n-1)) / (cd) - 1/k^2``.  The
    only spherical class of positive rank with ``Im Z = 0`` on the line is
    ``(k, -H, (d+1)/k)``, present iff ``k | d+1``; it removes the points with
    ``alpha^2 <= 1/(d k^2)``.
    """
    hole = 1 if (d + 1) % k == 0 else 0
    return Fraction((n - 1) * k * k + d + hole, k)


def line_filter_threshold(d: int, n: int) -> tuple[Fraction, int]:
    """Smallest ``g(k)`` over ``k >= 1`` and the ``k`` attaining it."""
    best, best_k = _line_coefficient(d, n, 1), 1
    k = 1
    while True:
        k += 1
        # g(k) >= ((n-1)k^2 + d)/k, which increases once k^2 >= d/(n-1)
        lower = Fraction((n - 1) * k * k + d, k)
        if (n - 1) * k * k >= d and lower >= best:
            return best, best_k
        g = _line_coefficient(d, n, k)
        if g < best:
            best, best_k = g, k


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def _candidates_for_c(d: int, n: int, c: int, s_max: int, g_min: Fraction | None) -> list[tuple[int, int]]:
    h = isqrt(4 * d * (n - 1) * c * c)
    s_hi = -(h + 1)
    s_lo = -s_max
    if g_min is not None:
        s_lo = max(s_lo, _ceil(-c * g_min))
    return [(c, s) for s in range(s_lo, s_hi + 1)]


def enumerate_candidate_walls(
    d: int,
    n: int,
    quadrant: str = LEFT,
    bounds: tuple[int, int] = (20, 200),
    *,
    line_filter: bool = True,
    workers: int | None = None,
) -> list[Wall]:
    """Semicircular candidate walls of ``(1, 0, 1-n)`` from classes ``(0, cH, s)``.

    Left quadrant: ``0 < c <= c_max`` and ``-s_max <= s < 0``, hyperbolic and
    with positive radius.  With ``line_filter`` the candidates crossing a
    quantized line ``beta = -1/k`` inside ``V(X)`` are dropped as well.  The
    right quadrant is the mirror image under the derived dual.  Circles are
    deduplicated and sorted by centre, descending.
    """
    if n < 2:
        raise DomainError("n must be >= 2")
    if quadrant not in (LEFT, RIGHT):
        raise DomainError(f"unknown quadrant {quadrant!r}")
    c_max, s_max = bounds
    if c_max < 1 or s_max < 1:
        raise DomainError("bounds must be >= 1")
    g_min = line_filter_threshold(d, n)[0] if line_filter else None
    lat = NSLattice.rank_one(d)
    workers = workers or worker_count()

    def stripe(cs: Iterable[int]) -> list[tuple[int, int]]:
        out = []
        for c in cs:
            out.extend(_candidates_for_c(d, n, c, s_max, g_min))
        return out

    cs = list(range(1, c_max + 1))
    if workers > 1:
        chunks = [cs[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = [p for chunk in pool.map(stripe, chunks) for p in chunk]
    else:
        pairs = stripe(cs)

    grouped: dict[tuple, list[MukaiVector]] = {}
    for c, s in sorted(pairs):
        u = MukaiVector(0, (c,), s, lat)
        w = wall_from_destabilizer(d, n, u)
        if w is None:
            continue
        grouped.setdefault(w.key, []).append(u)
    v = hilbert_vector(d, n)
    walls = [
        Wall(SEMICIRCLE, us[0], v, key[1], key[2], classes=tuple(us)) for key, us in grouped.items()
    ]
    if quadrant == RIGHT:
        walls = [w.dual() for w in walls]
    return sorted(walls, key=lambda w: w.center, reverse=True)


def walls_cross(w1: Wall, w2: Wall) -> bool:
    """Do two semicircles meet transversally in ``alpha > 0``?

    With ``D = (b1 - b2)^2`` the circles cross iff ``(r1 - r2)^2 < D < (r1 + r2)^2``,
    i.e. ``(D - r1^2 - r2^2)^2 < 4 r1^2 r2^2``; everything stays rational.
    """
    if w1.shape != SEMICIRCLE or w2.shape != SEMICIRCLE:
        raise DomainError("only semicircles are compared")
    D = (w1.center - w2.center) ** 2
    t = D - w1.radius_sq - w2.radius_sq
    return t * t < 4 * w1.radius_sq * w2.radius_sq


@dataclass(frozen=True)
class Contradiction:
    """Candidates ``(0, cH, s)`` with ``s_min <= s <= s_max`` ruled out by ``reason``."""

    c: int
    s_min: int
    s_max: int
    reason: str

    @property
    def size(self) -> int:
        return self.s_max - self.s_min + 1


@dataclass(frozen=True)
class NoWallCertificate:
    n: int
    k: int
    d: int
    bounds: tuple[int, int]
    candidates_checked: int
    contradictions: tuple[Contradiction, ...]
    surviving: tuple[Wall, ...]
    checks: tuple[tuple[str, bool], ...]

    @property
    def covered(self) -> int:
        return sum(rec.size for rec in self.contradictions)

    @property
    def valid(self) -> bool:
        return (
            not self.surviving
            and self.covered == self.candidates_checked
            and all(ok for _, ok in self.checks)
        )


def _line_checks(n: int, k: int, d: int) -> list[tuple[str, bool]]:
    beta = Fraction(-1, k)
    _, im_v = charge_parts(d, Fraction(1), beta, 1, 0, 1 - n)
    checks = [("im_v_equals_2d_over_k", im_v == Fraction(2 * d, k))]
    # Im Z(r, cH, s) / alpha = 2d (ck + r) / k on the line
    samples = [(r, c) for r in range(-3, 4) for c in range(-3, 4)]
    checks.append((
        "im_quantized_on_line",
        all(charge_parts(d, Fraction(1), beta, r, c, 0)[1] == Fraction(2 * d * (c * k + r), k) for r, c in samples),
    ))
    # a spherical (r, cH, s) with Im Z = 0 on the line needs r = -ck and k | d c^2 + 1 ... forcing k | d + 1
    checks.append(("line_avoids_spherical_classes", (d + 1) % k != 0))
    return checks


def certify_no_walls(
    n: int,
    k: int,
    bounds: tuple[int, int] = (500, 10**6),
    *,
    exhaustive: bool = False,
) -> NoWallCertificate:
    """Certificate that ``(1, 0, 1-n)`` has no semicircular wall with ``beta < 0``.

    Requires ``d = k^2 (n-1)`` with ``k > 1``.  For each ``c`` the candidates
    ``s`` split into an interval failing hyperbolicity and an interval whose
    walls meet the wall-free line ``beta = -1/k``; both predicates are
    monotone in ``s < 0``, so checking the interval endpoints decides the
    whole interval.  Anything left over is reported in ``surviving``.

    ``exhaustive=True`` evaluates every candidate separately through
    :func:`hyperbolicity_test`, :func:`wall_from_destabilizer` and
    :func:`line_meets_wall`; it is meant for small bounds.
    """
    if k <= 1:
        raise DomainError("k > 1 is required")
    if n < 2:
        raise DomainError("n >= 2 is required")
    c_max, s_max = bounds
    if c_max < 1 or s_max < 1:
        raise DomainError("bounds must be >= 1")
    d = k * k * (n - 1)
    lat = NSLattice.rank_one(d)
    records: list[Contradiction] = []
    surviving: dict[tuple, list[MukaiVector]] = {}
    interval_ok = True

    def u(c: int, s: int) -> MukaiVector:
        return MukaiVector(0, (c,), s, lat)

    for c in range(1, c_max + 1):
        if exhaustive:
            for s in range(-s_max, 0):
                cand = u(c, s)
                if not hyperbolicity_test(d, n, cand):
                    records.append(Contradiction(c, s, s, FAILS_HYPERBOLICITY))
                    continue
                wall = wall_from_destabilizer(d, n, cand)
                if wall is None:
                    records.append(Contradiction(c, s, s, NON_POSITIVE_RADIUS))
                elif line_meets_wall(n, k, cand):
                    records.append(Contradiction(c, s, s, MEETS_WALL_FREE_LINE))
                else:
                    surviving.setdefault(wall.key, []).append(cand)
            continue

        h = isqrt(4 * d * (n - 1) * c * c)
        # s in [-min(h, s_max), -1]: s^2 <= 4d(n-1)c^2
        lo = -min(h, s_max)
        if lo <= -1:
            interval_ok &= not hyperbolicity_test(d, n, u(c, lo)) and not hyperbolicity_test(d, n, u(c, -1))
            records.append(Contradiction(c, lo, -1, FAILS_HYPERBOLICITY))
        if h + 1 > s_max:
            continue
        # hyperbolic candidates: s in [-s_max, -(h+1)]; the line is met iff s < -2k(n-1)c
        top = min(-(h + 1), -2 * k * (n - 1) * c - 1)
        if top >= -s_max:
            for s in (-s_max, top):
                interval_ok &= hyperbolicity_test(d, n, u(c, s)) and line_meets_wall(n, k, u(c, s))
            records.append(Contradiction(c, -s_max, top, MEETS_WALL_FREE_LINE))
        for s in range(max(top + 1, -s_max), -(h + 1) + 1):
            wall = wall_from_destabilizer(d, n, u(c, s))
            if wall is not None:
                surviving.setdefault(wall.key, []).append(u(c, s))

    v = hilbert_vector(d, n)
    walls = tuple(
        Wall(SEMICIRCLE, us[0], v, key[1], key[2], classes=tuple(us)) for key, us in surviving.items()
    )
    checks = _line_checks(n, k, d)
    if not exhaustive:
        checks.append(("interval_endpoints", interval_ok))
    return NoWallCertificate(
        n=n,
        k=k,
        d=d,
        bounds=(c_max, s_max),
        candidates_checked=c_max * s_max,
        contradictions=tuple(records),
        surviving=walls,
        checks=tuple(checks),
    )
