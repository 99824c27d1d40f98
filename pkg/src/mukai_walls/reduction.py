"""Reduction of a primitive Mukai vector to the Hilbert-scheme normal form.

Pipeline: normalize (rank > 0, ample divisor) -> deform to an elliptic K3 with
a section -> coprimality twist -> Fourier-Mukai step to ``(1, 0, 1-n)`` ->
(for ``n >= 2``) deformation to ``Pic = Z H`` with ``H^2 = 2k^2(n-1)`` and a
no-wall certificate.  Autoequivalences are tracked as integer isometries of
the Mukai lattice; deformations are lattice substitutions that preserve the
square.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import gcd

from .arith import gcd_all, is_prime, unimodular_inverse
from .errors import ConsistencyError, DomainError, ResourceError
from .lattice import (
    Isometry,
    MukaiVector,
    NSLattice,
    compose,
    identity_isometry,
    mukai_pairing,
    shift_isometry,
    tensor_isometry,
    twist_isometry,
    verify_isometry,
)
from .walls import NoWallCertificate, certify_no_walls

__all__ = [
    "NORMALIZE",
    "DEFORM_TO_ELLIPTIC",
    "COPRIME_TWIST",
    "FM_STEP",
    "FINAL_DEFORMATION",
    "WALL_CERTIFICATE",
    "ReductionStep",
    "ReductionTrace",
    "normalize_vector",
    "deform_to_elliptic",
    "make_coprime_twist",
    "fm_step",
    "run_reduction",
    "dirichlet_k",
]

NORMALIZE = "Normalize"
DEFORM_TO_ELLIPTIC = "DeformToElliptic"
COPRIME_TWIST = "CoprimeTwist"
FM_STEP = "FMStep"
FINAL_DEFORMATION = "FinalDeformation"
WALL_CERTIFICATE = "WallCertificate"

TERMINALS = {0: "spherical_point", 1: "k3_surface"}

FM_TARGET = NSLattice.elliptic(("s'", "f'"))


@dataclass
class ReductionStep:
    kind: str
    before: MukaiVector
    after: MukaiVector
    isometry_word: tuple[str, ...] = ()
    isometry: Isometry | None = None
    params: dict = field(default_factory=dict)
    checks: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ReductionStep):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.before == other.before
            and self.after == other.after
            and self.isometry_word == other.isometry_word
            and (self.isometry.matrix if self.isometry else None)
            == (other.isometry.matrix if other.isometry else None)
            and self.params == other.params
            and list(map(tuple, self.checks)) == list(map(tuple, other.checks))
        )


@dataclass
class ReductionTrace:
    input: MukaiVector
    steps: list[ReductionStep]
    n: int
    certificate: NoWallCertificate | None = None
    terminal: str = ""

    @property
    def output(self) -> MukaiVector:
        return self.steps[-1].after if self.steps else self.input

    @property
    def ok(self) -> bool:
        if not all(step.ok for step in self.steps):
            return False
        return self.certificate is None or self.certificate.valid


def _base_checks(before: MukaiVector, after: MukaiVector) -> list[tuple[str, bool]]:
    return [
        ("square_preserved", before.square == after.square),
        ("primitive_preserved", before.is_primitive == after.is_primitive),
    ]


def _finish(kind: str, before: MukaiVector, isos: list[Isometry], params: dict,
            extra: list[tuple[str, bool]] = ()) -> ReductionStep:
    iso = compose(isos) if isos else identity_isometry(before.lattice)
    after = iso(before)
    checks = _base_checks(before, after)
    checks.append(("isometry_verified", verify_isometry(iso)))
    checks.extend(extra)
    return ReductionStep(kind, before, after, iso.word, iso, params, checks)


def _require_primitive(v: MukaiVector) -> None:
    if not v.is_primitive:
        raise DomainError(f"{v} is not primitive")


def _require(v: MukaiVector) -> None:
    _require_primitive(v)
    if v.square < -2:
        raise DomainError(f"v^2 = {v.square} < -2: moduli space is empty")


def _effective(lat: NSLattice, delta: tuple[int, ...]) -> bool:
    if lat.is_rank_one:
        return delta[0] > 0
    if lat.is_elliptic:
        a, b = delta
        return a >= 0 and b >= 0 and (a or b)
    raise DomainError("effectivity is decided for rank-one and elliptic lattices only")


def _first_positive(x: int, step: int) -> int:
    """Smallest ``n >= 0`` with ``x + n * step > 0`` (``step > 0``)."""
    return 0 if x > 0 else (-x) // step + 1


def normalize_vector(lat: NSLattice, v: MukaiVector) -> ReductionStep:
    """Autoequivalences taking ``v`` to a vector of positive rank with ample divisor."""
    if v.lattice != lat:
        raise DomainError("vector does not live on the given lattice")
    _require(v)
    isos: list[Isometry] = []
    path = [v]

    def apply(iso: Isometry) -> None:
        isos.append(iso)
        path.append(iso(path[-1]))

    if v.r < 0:
        apply(shift_isometry(lat))
    cur = path[-1]
    if cur.r == 0:
        if not any(cur.delta):
            # (0,0,-1): ST_O;  (0,0,1): ST_O[1]
            apply(twist_isometry(lat))
            if cur.s > 0:
                apply(shift_isometry(lat))
        else:
            if not _effective(lat, cur.delta):
                if not _effective(lat, tuple(-x for x in cur.delta)):
                    raise DomainError("neither delta nor -delta is effective")
                apply(shift_isometry(lat))
            cur = path[-1]
            H = lat.ample_class()
            n = _first_positive(cur.s, lat.dot(H, cur.delta))
            if n:
                apply(tensor_isometry(lat, [n * h for h in H]))
            apply(twist_isometry(lat))
            apply(shift_isometry(lat))
    cur = path[-1]
    if not lat.is_ample(cur.delta):
        H = lat.ample_class()
        if lat.is_rank_one:
            n = _first_positive(cur.delta[0], cur.r)
        else:
            a, b = cur.delta
            n = max(_first_positive(a, cur.r), _first_positive(b - 2 * a, cur.r))
        apply(tensor_isometry(lat, [n * h for h in H]))
    after = path[-1]
    extra = [("rank_positive", after.r > 0), ("delta_ample", lat.is_ample(after.delta))]
    return _finish(NORMALIZE, v, isos, {"path": [list(p.coords) for p in path]}, extra)


def deform_to_elliptic(v: MukaiVector) -> ReductionStep:
    """Move ``(r, mH, s)`` on ``<2d>`` to the elliptic lattice via ``H -> s + (d+1) f``.

    For ``d = 1`` the image ``s + 2f`` is not ample; the vector is then twisted
    by the ample class ``s + 3f`` so that its divisor becomes ample.
    """
    lat = v.lattice
    if not lat.is_rank_one:
        raise DomainError("deformation starts from a rank-one lattice")
    m = v.delta[0]
    if m <= 0:
        raise DomainError("divisor must be a positive multiple of H")
    if v.r <= 0:
        raise DomainError("rank must be positive")
    d = lat.degree
    U = NSLattice.elliptic()
    image = MukaiVector(v.r, (m, m * (d + 1)), v.s, U)
    checks = [
        ("polarization_square", U.dot((1, d + 1), (1, d + 1)) == 2 * d),
        ("delta_square_preserved", U.dot(image.delta, image.delta) == lat.dot(v.delta, v.delta)),
    ]
    params = {"d": d, "d1_detour": d == 1}
    word: tuple[str, ...] = ("Deform",)
    iso = None
    after = image
    if d == 1:
        iso = tensor_isometry(U, U.ample_class())
        after = iso(image)
        checks.append(("detour_isometry_verified", verify_isometry(iso)))
        word = word + iso.word
    checks = _base_checks(v, after) + checks
    checks.append(("delta_ample", U.is_ample(after.delta)))
    return ReductionStep(DEFORM_TO_ELLIPTIC, v, after, word, iso, params, checks)


def dirichlet_k(r: int, m: int, b: int, s0: int, cap: int = 10**4) -> tuple[int, int]:
    """Smallest ``k >= 0`` with ``b/c + k r/c`` prime, above ``gcd(s0, m)``, and ``s0 + mk > 0``.

    Here ``c = gcd(b, r)``.  Returns ``(k, prime)``.
    """
    g = gcd(s0, m)
    c = gcd(b, r)
    for k in range(cap):
        p = b // c + k * (r // c)
        if p > g and s0 + m * k > 0 and is_prime(p):
            return k, p
    raise ResourceError(f"no admissible k among the first {cap} candidates")


_FIXUP_MOVES = ((1, 0), (-1, 0), (0, 1), (0, -1), None)


def _coprime_ok(v: MukaiVector) -> bool:
    return v.r > 0 and gcd(v.r, v.delta[0]) == 1


def _fixup_search(v: MukaiVector, max_depth: int = 12) -> list[Isometry]:
    """Shortest word in ``TensorBy(+-s)``, ``TensorBy(+-f)``, ``ST_O[1]`` reaching ``gcd(r, Delta.f) = 1``."""
    U = v.lattice
    moves = []
    for mv in _FIXUP_MOVES:
        if mv is None:
            moves.append([twist_isometry(U), shift_isometry(U)])
        else:
            moves.append([tensor_isometry(U, mv)])
    start = v.coords
    parent: dict[tuple, tuple | None] = {start: None}
    depth = {start: 0}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        vec = MukaiVector.from_coords(cur, U)
        if _coprime_ok(vec):
            word: list[Isometry] = []
            while parent[cur] is not None:
                prev, idx = parent[cur]
                word = moves[idx] + word
                cur = prev
            return word
        if depth[cur] >= max_depth:
            continue
        for idx, isos in enumerate(moves):
            nxt = compose(isos)(vec).coords
            if nxt not in parent:
                parent[nxt] = (cur, idx)
                depth[nxt] = depth[cur] + 1
                queue.append(nxt)
    raise ResourceError(f"no coprime representative within {max_depth} moves")


def make_coprime_twist(v: MukaiVector, cap: int = 10**4) -> ReductionStep:
    """Twist by ``kf`` so that ``gcd(Delta_k, s_k) = 1``, then apply ``ST_O[1]``.

    ``k`` comes from a prime in the progression ``b/c + k r/c``.  Afterwards
    the rank is ``s_k``, but ``gcd(s_k, Delta.f)`` equals ``gcd(s0, m)`` and
    can exceed 1; a short search over further twists then restores
    ``gcd(r, Delta.f) = 1``, and the extra word is recorded under ``fixup``.
    """
    U = v.lattice
    if not U.is_elliptic:
        raise DomainError("coprimality twist runs on the elliptic lattice")
    _require_primitive(v)
    m, b = v.delta
    if v.r <= 0 or m <= 0:
        raise DomainError("need r > 0 and a positive section coefficient")
    k, p = dirichlet_k(v.r, m, b, v.s, cap)
    twist_k = tensor_isometry(U, (0, k))
    v_k = twist_k(v)
    st1 = [twist_isometry(U), shift_isometry(U)]
    isos = [twist_k] + st1
    mid = compose(isos)(v)
    fix = [] if _coprime_ok(mid) else _fixup_search(mid)
    isos += fix
    extra = [
        ("delta_k_formula", v_k.delta == (m, b + k * v.r)),
        ("s_k_formula", v_k.s == v.s + m * k),
        ("s_k_positive", v_k.s > 0),
        ("prime_witness", is_prime(p) and p > gcd(v.s, m)),
        ("gcd_delta_k_s_k_is_1", gcd_all((*v_k.delta, v_k.s)) == 1),
    ]
    step = _finish(COPRIME_TWIST, v, isos, {
        "k": k,
        "prime": p,
        "gcd_s_m": gcd(v.s, m),
        "v_k": list(v_k.coords),
        "fixup": list(compose(fix).word) if fix else [],
    }, extra)
    step.checks.append(("rank_coprime_to_fiber_degree", _coprime_ok(step.after)))
    return step


def _euclid(r: int, e: int) -> tuple[int, int]:
    """``(alpha, beta)`` with ``beta r - alpha e = 1``, minimal ``alpha > 0`` and ``beta != 0``."""
    if gcd(r, e) != 1:
        raise DomainError(f"gcd(r, Delta.f) = gcd({r}, {e}) != 1")
    alpha = (-pow(e, -1, r)) % r if r > 1 else 0
    if alpha == 0:
        alpha = r
    beta, rem = divmod(1 + alpha * e, r)
    if rem:
        raise ConsistencyError("Euclid representative failed")
    if beta == 0:
        alpha, beta = alpha + r, beta + e
    if beta == 0:
        raise ConsistencyError("beta = 0 after adjustment")
    return alpha, beta


def fm_identity_vectors(r: int, e: int, alpha: int, beta: int, U: NSLattice):
    """``w = (0, alpha f, beta)``, ``w' = (alpha, beta s + (alpha+beta) f, beta)``,
    ``t = (alpha, beta s + (beta - r) f, -e)``."""
    w = MukaiVector(0, (0, alpha), beta, U)
    w_prime = MukaiVector(alpha, (beta, alpha + beta), beta, U)
    t = MukaiVector(alpha, (beta, beta - r), -e, U)
    return w, w_prime, t


def fm_identities(w: MukaiVector, w_prime: MukaiVector, t: MukaiVector) -> tuple[int, int, int, int, int]:
    """``((w',w'), (w',w), (t,t), (t,w), (t,w'))``; expected ``(0, 0, -2, 0, -1)``."""
    return (
        mukai_pairing(w_prime, w_prime),
        mukai_pairing(w_prime, w),
        mukai_pairing(t, t),
        mukai_pairing(t, w),
        mukai_pairing(t, w_prime),
    )


def fm_step(v: MukaiVector, alpha_beta: tuple[int, int] | None = None) -> ReductionStep:
    """Cohomological Fourier-Mukai transform sending ``v`` to ``(1, 0, 1-n)``.

    The isometry maps ``u0 = v + (v^2/2) w`` to ``(1,0,0)``, ``w`` to ``(0,0,1)``
    and the projections of ``t`` and ``w'`` onto ``<u0, w>^perp`` to ``-s'``
    and ``f'`` of the partner surface.
    """
    U = v.lattice
    if not U.is_elliptic:
        raise DomainError("Fourier-Mukai step runs on the elliptic lattice")
    _require_primitive(v)
    if v.r <= 0:
        raise DomainError("rank must be positive")
    r, e = v.r, v.delta[0]
    alpha, beta = alpha_beta if alpha_beta else _euclid(r, e)
    if beta * r - alpha * e != 1:
        raise DomainError("alpha, beta do not solve beta r - alpha Delta.f = 1")
    w, w_prime, t = fm_identity_vectors(r, e, alpha, beta, U)
    ids = fm_identities(w, w_prime, t)
    half = v.square // 2
    n = half + 1
    u0 = v + half * w

    def proj(x: MukaiVector) -> MukaiVector:
        return x + mukai_pairing(x, w) * u0 + mukai_pairing(x, u0) * w

    columns = [u0.coords, (-proj(t)).coords, proj(w_prime).coords, w.coords]
    B = [[col[i] for col in columns] for i in range(4)]
    psi = Isometry(tuple(map(tuple, unimodular_inverse(B))), ("FM",), U, target=FM_TARGET)
    after = psi(v)
    target = MukaiVector(1, (0, 0), 1 - n, FM_TARGET)
    checks = _base_checks(v, after) + [
        ("w_dot_v_is_minus_1", mukai_pairing(w, v) == -1),
        ("alpha_positive", alpha > 0),
        ("beta_nonzero", beta != 0),
        ("w'_w'_is_0", ids[0] == 0),
        ("w'_w_is_0", ids[1] == 0),
        ("t_t_is_minus_2", ids[2] == -2),
        ("t_w_is_0", ids[3] == 0),
        ("t_w'_is_minus_1", ids[4] == -1),
        ("isometry_verified", verify_isometry(psi)),
        ("w_maps_to_point_class", psi(w) == MukaiVector(0, (0, 0), 1, FM_TARGET)),
        ("w'_maps_to_rank_0", psi(w_prime).r == 0),
        ("t_maps_to_rank_0", psi(t).r == 0),
        ("v_maps_to_hilbert_vector", after == target),
    ]
    params = {
        "alpha": alpha,
        "beta": beta,
        "w": list(w.coords),
        "w_prime": list(w_prime.coords),
        "t": list(t.coords),
        "n": n,
        "genericity": "assumed",
    }
    return ReductionStep(FM_STEP, v, after, psi.word, psi, params, checks)


def _final_deformation(v: MukaiVector, k: int) -> ReductionStep:
    n = 1 - v.s
    d = k * k * (n - 1)
    U = v.lattice
    lat = NSLattice.rank_one(d)
    after = MukaiVector(1, (0,), 1 - n, lat)
    pol = (1, d + 1)
    checks = _base_checks(v, after) + [
        ("input_is_hilbert_vector", v.r == 1 and not any(v.delta)),
        ("polarization_degree", U.dot(pol, pol) == 2 * d),
        ("polarization_ample", U.is_ample(pol)),
    ]
    return ReductionStep(FINAL_DEFORMATION, v, after, ("Deform",), None, {"k": k, "d": d}, checks)


def run_reduction(
    lat: NSLattice,
    v: MukaiVector,
    k_final: int = 2,
    bounds: tuple[int, int] = (500, 10**6),
) -> ReductionTrace:
    """Full pipeline with every step re-verified."""
    if v.lattice != lat:
        raise DomainError("vector does not live on the given lattice")
    _require(v)
    if k_final < 2:
        raise DomainError("k_final must be >= 2")
    if not (lat.is_rank_one or lat.is_elliptic):
        raise DomainError("supported lattices: rank one <2d> and the elliptic plane U")
    n = (v.square + 2) // 2
    steps = [normalize_vector(lat, v)]
    if lat.is_rank_one:
        steps.append(deform_to_elliptic(steps[-1].after))
    steps.append(make_coprime_twist(steps[-1].after))
    steps.append(fm_step(steps[-1].after))
    certificate = None
    terminal = TERMINALS.get(n, "")
    if n >= 2:
        steps.append(_final_deformation(steps[-1].after, k_final))
        certificate = certify_no_walls(n, k_final, bounds)
        final = steps[-1].after
        steps.append(ReductionStep(
            WALL_CERTIFICATE, final, final, (), None,
            {"k": k_final, "d": certificate.d, "bounds": list(bounds)},
            [("certificate_valid", certificate.valid)],
        ))
        terminal = "hilbert_scheme"
    for a, b in zip(steps, steps[1:]):
        if a.after != b.before:
            raise ConsistencyError(f"trace is not contiguous between {a.kind} and {b.kind}")
    out = steps[-1].after
    if (out.r, tuple(out.delta), out.s) != (1, (0,) * out.lattice.rank, 1 - n):
        raise ConsistencyError(f"trace ends at {out}, expected (1, 0, {1 - n})")
    return ReductionTrace(v, steps, n, certificate, terminal)
