from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mukai_walls.errors import DomainError
from mukai_walls.lattice import MukaiVector, NSLattice
from mukai_walls.stability import StabParam, slope, slopes_equal
from mukai_walls.walls import (
    FAILS_HYPERBOLICITY,
    LEFT,
    MEETS_WALL_FREE_LINE,
    RIGHT,
    SEMICIRCLE,
    VERTICAL,
    certify_no_walls,
    enumerate_candidate_walls,
    hilbert_vector,
    hyperbolicity_test,
    line_filter_threshold,
    line_meets_wall,
    normalize_rank_zero,
    wall_from_destabilizer,
    walls_cross,
)

F = Fraction


def u(c, s, d=1):
    return MukaiVector(0, (c,), s, NSLattice.rank_one(d))


class TestNormalizeRankZero:
    def test_rank_zero_kept(self):
        assert normalize_rank_zero(u(2, -5), hilbert_vector(1, 3)) == u(2, -5)

    def test_positive_rank(self):
        n = 3
        v = hilbert_vector(1, n)
        got = normalize_rank_zero(MukaiVector(1, (2,), 5, v.lattice), v)
        assert got == u(-2, 1 - n - 5)

    def test_negative_rank(self):
        n = 3
        v = hilbert_vector(1, n)
        got = normalize_rank_zero(MukaiVector(-1, (2,), 5, v.lattice), v)
        assert got == u(2, 1 - n + 5)

    @given(st.integers(-5, 5), st.integers(-9, 9), st.integers(-20, 20))
    def test_same_numerical_wall(self, r, c, s):
        v = hilbert_vector(1, 2)
        w = MukaiVector(r, (c,), s, v.lattice)
        # on the known wall of (0,H,-3) slopes agree iff they agree after normalization
        alpha_sq, beta = F(1, 4), F(-1, 2)
        before = slopes_equal(1, alpha_sq, beta, v, w)
        after = slopes_equal(1, alpha_sq, beta, v, normalize_rank_zero(w, v))
        if not w.is_zero and not normalize_rank_zero(w, v).is_zero:
            assert before == after


class TestWallFromDestabilizer:
    def test_semicircle(self):
        w = wall_from_destabilizer(1, 2, u(1, -3))
        assert w.shape == SEMICIRCLE
        assert (w.center, w.radius_sq) == (F(-3, 2), F(5, 4))

    def test_empty(self):
        assert wall_from_destabilizer(1, 2, u(1, -2)) is None

    def test_vertical(self):
        w = wall_from_destabilizer(1, 2, u(0, 1))
        assert w.shape == VERTICAL and w.beta == 0

    def test_rank_must_be_zero(self):
        with pytest.raises(DomainError):
            wall_from_destabilizer(1, 2, MukaiVector(1, (0,), 0, NSLattice.rank_one(1)))

    @given(st.integers(1, 6), st.integers(1, 8), st.integers(-80, -1), st.integers(1, 5))
    def test_ray_invariance_and_slope_equality(self, d, c, s, lam):
        n = 2
        w = wall_from_destabilizer(d, n, u(c, s, d))
        scaled = wall_from_destabilizer(d, n, u(lam * c, lam * s, d))
        assert (w is None) == (scaled is None)
        if w is not None:
            assert w.key == scaled.key
        if w is not None:
            alpha_sq, beta = w.sample_point()
            assert slopes_equal(d, alpha_sq, beta, w.for_vector, w.destabilizer)

    def test_slope_equality_at_rational_point(self):
        w = wall_from_destabilizer(1, 2, u(1, -3))
        # (beta + 3/2)^2 + alpha^2 = 5/4 passes through (-1/2, 1/2)
        assert (F(-1, 2) - w.center) ** 2 + F(1, 4) == w.radius_sq
        p = StabParam(1, F(1, 2), F(-1, 2))
        assert slope(p, w.for_vector) == slope(p, w.destabilizer)


class TestHyperbolicity:
    def test_examples(self):
        assert hyperbolicity_test(1, 2, u(1, -3))
        assert not hyperbolicity_test(4, 2, u(1, -3))
        assert hyperbolicity_test(3, 2, u(0, 1)) and hyperbolicity_test(3, 2, u(0, -1))

    @given(st.integers(1, 6), st.integers(2, 6), st.integers(1, 10), st.integers(-300, -1))
    def test_equivalent_to_positive_radius(self, d, n, c, s):
        assert hyperbolicity_test(d, n, u(c, s, d)) == (wall_from_destabilizer(d, n, u(c, s, d)) is not None)


class TestLine:
    def test_examples(self):
        assert line_meets_wall(2, 2, u(1, -5, 4))
        assert not line_meets_wall(2, 2, u(1, -3, 4))

    def test_hypotheses(self):
        with pytest.raises(DomainError):
            line_meets_wall(2, 2, u(1, 3, 4))
        with pytest.raises(DomainError):
            line_meets_wall(2, 2, u(1, -5, 5))

    @pytest.mark.parametrize("k,n", [(2, 2), (3, 2), (2, 3), (3, 4)])
    def test_hyperbolic_implies_meets(self, k, n):
        d = k * k * (n - 1)
        for c in range(1, 15):
            for s in range(-400, 0):
                if hyperbolicity_test(d, n, u(c, s, d)):
                    assert line_meets_wall(n, k, u(c, s, d))

    def test_threshold_values(self):
        assert line_filter_threshold(1, 2) == (3, 1)
        assert line_filter_threshold(4, 2) == (4, 2)


class TestEnumerate:
    def test_contains_known_wall(self):
        walls = enumerate_candidate_walls(1, 2, LEFT, (3, 10))
        keys = {w.key for w in walls}
        assert (SEMICIRCLE, F(-3, 2), F(5, 4)) in keys
        w = next(w for w in walls if w.center == F(-3, 2))
        assert u(1, -3) in w.classes

    def test_empty_when_d_is_k_squared_times_n_minus_1(self):
        assert enumerate_candidate_walls(4, 2, LEFT, (500, 10**6)) == []

    def test_small_bounds_empty(self):
        assert enumerate_candidate_walls(1, 2, LEFT, (1, 2)) == []

    def test_sorted_and_deduplicated(self):
        walls = enumerate_candidate_walls(1, 3, LEFT, (10, 100))
        centers = [w.center for w in walls]
        assert centers == sorted(centers, reverse=True)
        assert len({w.key for w in walls}) == len(walls)

    def test_unfiltered_matches_literal_postcondition(self):
        d, n, bounds = 4, 2, (6, 60)
        got = {w.key for w in enumerate_candidate_walls(d, n, LEFT, bounds, line_filter=False)}
        expected = set()
        for c in range(1, bounds[0] + 1):
            for s in range(-bounds[1], 0):
                if hyperbolicity_test(d, n, u(c, s, d)):
                    w = wall_from_destabilizer(d, n, u(c, s, d))
                    if w is not None:
                        expected.add(w.key)
        assert got == expected and got

    def test_filter_only_removes(self):
        full = {w.key for w in enumerate_candidate_walls(1, 2, LEFT, (8, 80), line_filter=False)}
        filtered = {w.key for w in enumerate_candidate_walls(1, 2, LEFT, (8, 80))}
        assert filtered <= full

    def test_right_quadrant_is_mirror(self):
        left = enumerate_candidate_walls(1, 2, LEFT, (5, 30))
        right = enumerate_candidate_walls(1, 2, RIGHT, (5, 30))
        assert sorted((-w.center, w.radius_sq) for w in left) == sorted((w.center, w.radius_sq) for w in right)
        assert all(w.center > 0 for w in right)

    def test_thread_count_does_not_change_result(self):
        a = enumerate_candidate_walls(1, 3, LEFT, (12, 120), workers=1)
        b = enumerate_candidate_walls(1, 3, LEFT, (12, 120), workers=4)
        assert a == b

    def test_bad_inputs(self):
        with pytest.raises(DomainError):
            enumerate_candidate_walls(1, 1)
        with pytest.raises(DomainError):
            enumerate_candidate_walls(1, 2, "up")

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_nested_without_filter(self, n):
        walls = enumerate_candidate_walls(1, n, LEFT, (10, 100), line_filter=False)
        assert not any(walls_cross(a, b) for a, b in combinations(walls, 2))


class TestCrossing:
    def test_walls_of_different_vectors_can_cross(self):
        a = wall_from_destabilizer(1, 2, u(1, -3))  # centre -3/2, radius^2 5/4
        b = wall_from_destabilizer(1, 5, u(1, -5))  # centre -5/2, radius^2 9/4
        assert walls_cross(a, b) and walls_cross(b, a)

    def test_nested_and_disjoint(self):
        a = wall_from_destabilizer(1, 2, u(1, -3))
        b = wall_from_destabilizer(1, 2, u(1, -4))
        assert not walls_cross(a, b)
        far = wall_from_destabilizer(1, 2, u(1, -40))
        assert not walls_cross(a, far)


class TestCertificate:
    @pytest.mark.parametrize("n,k", [(2, 2), (3, 2)])
    def test_valid(self, n, k):
        cert = certify_no_walls(n, k)
        assert cert.valid and cert.surviving == ()
        assert cert.d == k * k * (n - 1)
        assert cert.candidates_checked == 500 * 10**6

    def test_k_one_rejected(self):
        with pytest.raises(DomainError):
            certify_no_walls(2, 1)

    @pytest.mark.parametrize("n,k", [(2, 2), (3, 2), (2, 3), (4, 3)])
    def test_interval_mode_matches_exhaustive(self, n, k):
        bounds = (6, 150)
        fast = certify_no_walls(n, k, bounds)
        slow = certify_no_walls(n, k, bounds, exhaustive=True)
        assert fast.valid and slow.valid
        assert fast.covered == slow.covered == fast.candidates_checked == 6 * 150

        def reasons(cert):
            out = {}
            for rec in cert.contradictions:
                for s in range(rec.s_min, rec.s_max + 1):
                    assert (rec.c, s) not in out
                    out[(rec.c, s)] = rec.reason
            return out

        assert reasons(fast) == reasons(slow)
        assert set(reasons(fast).values()) <= {FAILS_HYPERBOLICITY, MEETS_WALL_FREE_LINE}
