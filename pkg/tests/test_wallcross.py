from __future__ import annotations

import random
from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mukai_walls.classes import Rank2Lattice, enumerate_square_classes
from mukai_walls.errors import DomainError
from mukai_walls.lattice import MukaiVector, NSLattice
from mukai_walls.stability import StabParam, central_charge
from mukai_walls.wallcross import (
    HILBERT_CHOW,
    ISOTROPIC_HYPERBOLIC,
    ISOTROPIC_SEMI_DEFINITE,
    SPHERICAL_PAIR,
    UNCLASSIFIED,
    classify_wall_kind,
    isotropic_jh_data,
    wall_lattice_basis,
)

F = Fraction
L1 = NSLattice.rank_one(1)


def v1(r, c, s, lat=L1):
    return MukaiVector(r, (c,), s, lat)


class TestWallLattice:
    def test_known_wall(self):
        v = v1(1, 0, -1)
        H = wall_lattice_basis(StabParam(1, F(1, 2), F(-1, 2)), v)
        assert H.basis[0] == v
        assert H.contains(v1(0, 1, -3))
        assert H.saturation_index == 1
        assert H.gram[0][0] == v.square

    @given(
        st.integers(1, 4),
        st.fractions(min_value=F(1, 10), max_value=5),
        st.fractions(min_value=-5, max_value=5),
        st.integers(-6, 6),
        st.integers(-6, 6),
        st.integers(-6, 6),
        st.integers(1, 4),
    )
    def test_contains_multiples_and_is_saturated(self, d, alpha, beta, r, c, s, lam):
        lat = NSLattice.rank_one(d)
        v = v1(r, c, s, lat)
        p = StabParam(d, alpha, beta)
        if central_charge(p, v).is_zero:
            with pytest.raises(DomainError):
                wall_lattice_basis(p, v)
            return
        H = wall_lattice_basis(p, v)
        assert H.contains(v) and H.contains(lam * v)
        assert H.saturation_index == 1
        for b in H.basis:
            zb, zv = central_charge(p, b), central_charge(p, v)
            assert zb.im * zv.re - zb.re * zv.im == 0

    def test_vertical_wall_is_hilbert_chow(self):
        v = v1(1, 0, -1)
        H = wall_lattice_basis(StabParam(1, 1, 0), v)
        assert H.contains(v1(0, 0, 1))
        assert classify_wall_kind(H, v).tag == HILBERT_CHOW

    def test_off_wall_positive_square_unclassified(self):
        v = v1(1, 0, -1)
        H = wall_lattice_basis(StabParam(1, F(1, 2), F(-1, 2)), v)
        assert classify_wall_kind(H, v).tag == UNCLASSIFIED


class TestClassify:
    def test_isotropic_semi_definite(self):
        kind = classify_wall_kind(Rank2Lattice.spherical_pair(2), (1, 1))
        assert kind.tag == ISOTROPIC_SEMI_DEFINITE
        assert (kind.s[0] + kind.t[0], kind.s[1] + kind.t[1]) == (1, 1)
        assert {kind.s, kind.t} == {(1, 0), (0, 1)}

    def test_isotropic_hyperbolic(self):
        kind = classify_wall_kind(Rank2Lattice(((-2, 2), (2, 0))), (2, 1))
        assert kind.tag == ISOTROPIC_HYPERBOLIC and kind.a == 2
        assert set(kind.twist_options) == {"ST_S^2", "ST_S^-2"}

    def test_spherical_pair_hyperbolic(self):
        kind = classify_wall_kind(Rank2Lattice.spherical_pair(3), (1, 3))
        assert kind.tag == SPHERICAL_PAIR and kind.m == 3

    def test_spherical_pair_semi_definite(self):
        kind = classify_wall_kind(Rank2Lattice.spherical_pair(2), (2, 1))
        assert kind.tag == SPHERICAL_PAIR and kind.m == 2

    def test_bad_square(self):
        assert classify_wall_kind(Rank2Lattice.spherical_pair(3), (1, 1)).tag == UNCLASSIFIED  # square 2
        with pytest.raises(DomainError):
            classify_wall_kind(Rank2Lattice.spherical_pair(3), (2, 0))  # square -8
        with pytest.raises(DomainError):
            classify_wall_kind(Rank2Lattice(((-2, 0), (0, -4))), (1, 0))  # negative definite


class TestJordanHolder:
    def test_examples(self):
        jh = isotropic_jh_data(Rank2Lattice(((-2, 2), (2, 0))), (2, 1))
        assert (jh.s, jh.a, jh.w) == ((1, 0), 2, (0, 1))
        assert jh.totally_semistable
        jh = isotropic_jh_data(Rank2Lattice(((-2, 1), (1, 0))), (1, 1))
        assert (jh.a, jh.w) == (1, (0, 1))

    def test_precondition(self):
        with pytest.raises(DomainError):
            isotropic_jh_data(Rank2Lattice(((-2, 2), (2, 0))), (1, 1))

    def test_random_instances(self):
        rng = random.Random(7)
        for _ in range(300):
            a = rng.randint(1, 6)
            G = ((-2, a), (a, 0))  # basis: spherical s, isotropic w, (s, w) = a
            # random unimodular change of basis P (columns = new basis in old coordinates)
            p, q = rng.randint(-2, 2), rng.randint(-2, 2)
            P = ((1 + p * q, p), (q, 1))
            Gp = tuple(
                tuple(sum(P[k][i] * G[k][l] * P[l][j] for k in range(2) for l in range(2)) for j in range(2))
                for i in range(2)
            )
            # v = a s + w in old coordinates (a, 1); new coordinates solve P x = (a, 1)
            x = (1 * a - p * 1, -q * a + (1 + p * q) * 1)
            H = Rank2Lattice(Gp)
            assert H.q(*x) == 0
            jh = isotropic_jh_data(H, x)
            assert jh.a == a
            assert all(ok for _, ok in jh.checks)


class TestLatticeClaims:
    @pytest.mark.parametrize("a", range(1, 6))
    def test_one_spherical_class_up_to_sign(self, a):
        H = Rank2Lattice(((-2, a), (a, 0)))
        classes = enumerate_square_classes(H, -2, 200)
        assert len({p if p > (0, 0) else (-p[0], -p[1]) for p in classes}) <= 1

    @pytest.mark.parametrize("m", range(3, 7))
    def test_no_interior_spherical_classes(self, m):
        # -2x^2 + 2mxy - 2y^2 = -2 with 2x/m <= y <= mx/2, x, y > 0 has no solutions
        for x in range(1, 1001):
            disc = (m * m - 4) * x * x + 4
            root = isqrt(disc)
            if root * root != disc:
                continue
            for y2 in (m * x + root, m * x - root):
                if y2 % 2 == 0 and y2 > 0:
                    y = y2 // 2
                    assert not (2 * x <= m * y and 2 * y <= m * x), (x, y)
