from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from linf_spanner import (AxisSquare, Point, PointSet, Side, Slope,
                          classify_slope, empty_square_exists, metric,
                          point_side_on, validate_general_position)
from linf_spanner.generators import generate_chew_family
from linf_spanner.geometry import (as_coord, clockwise_boundary_distance,
                                   square_family_through)

from conftest import brute_force_edges, general_position_sets


def P_(x, y, i=0):
    return Point(i, as_coord(x), as_coord(y))


@pytest.mark.parametrize("kind,expected", [("Linf", 3), ("L1", 4)])
def test_metric_examples(kind, expected):
    assert metric(P_(0, 0), P_(3, 1, 1), kind) == expected


def test_euclidean_example():
    assert metric(P_(0, 0), P_(3, 4, 1), "L2") == pytest.approx(5.0)


class TestGeneralPosition:
    def test_clean(self):
        assert validate_general_position(
            PointSet.from_coords([(0, 0), (1, 2)])) == []

    def test_shared_abscissa(self):
        v = validate_general_position(PointSet.from_coords([(0, 0), (0, 5)]))
        assert [(x.rule, tuple(x.ids)) for x in v] == \
            [("shared-abscissa", (0, 1))]

    def test_cosquare(self):
        # all four on the boundary of the square west=0, south=-1, side=2
        P = PointSet.from_coords([(0, 0), (2, F(1, 2)), (1, 1),
                                  (F(3, 2), -1)])
        sq = AxisSquare(0, -1, 2)
        assert all(sq.on_boundary(p) for p in P)
        v = validate_general_position(P)
        assert [(x.rule, tuple(sorted(x.ids))) for x in v] == \
            [("co-square", (0, 1, 2, 3))]

    def test_cosquare_needs_boundary(self):
        # (1, 2) lies above that square, so no common square exists
        P = PointSet.from_coords([(0, 0), (2, F(1, 2)), (1, 2),
                                  (F(3, 2), -1)])
        assert validate_general_position(P) == []


class TestSides:
    sq = AxisSquare(0, 0, 2)

    def test_west(self):
        assert point_side_on(self.sq, (0, 1)) == {Side.W}

    def test_corner(self):
        assert point_side_on(self.sq, (2, 0)) == {Side.S, Side.E}

    def test_interior(self):
        assert point_side_on(self.sq, (1, 1)) == frozenset()


class TestSquareFamily:
    def test_gentle_pair(self):
        fam = square_family_through(P_(0, 0), P_(2, 1, 1))
        assert fam.min_side == 2
        assert fam.minimal_squares() == ("south", (-1, 0))

    def test_square_box(self):
        fam = square_family_through(P_(0, 0), P_(1, 1, 1))
        assert fam.min_side == 1
        assert fam.minimal_squares() == (None, (0, 0))

    def test_coincident(self):
        with pytest.raises(ValueError):
            square_family_through(P_(0, 0), P_(0, 0, 1))

    def test_larger_side_placements_hold_both(self):
        fam = square_family_through(P_(0, 0), P_(2, 1, 1))
        for (w0, w1), (s0, s1) in fam.placements(3):
            for w in {w0, w1}:
                for s in {s0, s1}:
                    sq = AxisSquare(w, s, 3)
                    assert sq.on_boundary((0, 0)) and sq.on_boundary((2, 1))
        assert fam.placements(1) == []


class TestEmptySquare:
    def test_two_points(self):
        P = PointSet.from_coords([(0, 0), (3, 1)])
        ok, sq = empty_square_exists(P[0], P[1], P)
        assert ok and sq.side == 3
        assert sq.on_boundary(P[0].xy) and sq.on_boundary(P[1].xy)

    def test_chew_endpoints_not_adjacent(self):
        fam = generate_chew_family(12)
        P = fam.points
        assert empty_square_exists(P[fam.a], P[fam.b], P) == (False, None)

    def test_random_against_oracle(self):
        from linf_spanner import random_pointset
        for seed in range(10):
            P = random_pointset(6, seed)
            got = {(u, v) for u in P.ids for v in P.ids if u < v
                   and empty_square_exists(P[u], P[v], P)[0]}
            assert got == brute_force_edges(P)


@pytest.mark.parametrize("v,expected", [((2, 1), Slope.GENTLE),
                                        ((1, 3), Slope.STEEP),
                                        ((1, 1), Slope.GENTLE)])
def test_slope(v, expected):
    assert classify_slope((0, 0), v) == expected


class TestClockwise:
    sq = AxisSquare(0, 0, 1)

    def test_nw_to_sw(self):
        assert clockwise_boundary_distance(self.sq, (0, 1), (0, 0)) == 3

    def test_same_point(self):
        assert clockwise_boundary_distance(self.sq, (0, 1), (0, 1)) == 0

    def test_north_to_south(self):
        d = clockwise_boundary_distance(self.sq, (F(3, 10), 1), (F(3, 5), 0))
        assert d == pytest.approx(2.1, abs=1e-15)

    def test_off_boundary(self):
        with pytest.raises(ValueError):
            clockwise_boundary_distance(self.sq, (F(1, 2), F(1, 2)), (0, 0))


coords = st.tuples(st.integers(-1000, 1000), st.integers(-1000, 1000))


@given(coords, coords)
def test_metric_symmetry_and_order(p, q):
    u, v = P_(*p), P_(*q, 1)
    for k in ("Linf", "L1", "L2"):
        assert metric(u, v, k) == metric(v, u, k)
    dinf, d1 = float(metric(u, v, "Linf")), float(metric(u, v, "L1"))
    d2 = metric(u, v, "L2")
    assert dinf <= d2 + 1e-12 and d2 <= d1 + 1e-12 and d1 <= 2 * dinf


@given(coords, coords)
def test_slope_symmetry(p, q):
    if p[0] == q[0] and p[1] == q[1]:
        return
    assert classify_slope(p, q) == classify_slope(q, p)


@settings(max_examples=60, deadline=None)
@given(general_position_sets(min_size=3, max_size=9), st.data())
def test_empty_square_symmetry_monotone_witness(P, data):
    ids = P.ids
    u, v = data.draw(st.sampled_from([(a, b) for a in ids for b in ids
                                      if a < b]))
    ok, sq = empty_square_exists(P[u], P[v], P)
    assert ok == empty_square_exists(P[v], P[u], P)[0]
    if ok:
        assert sq.on_boundary(P[u].xy) and sq.on_boundary(P[v].xy)
        assert not any(sq.contains_open(p.xy) for p in P)
        drop = data.draw(st.sampled_from([i for i in ids if i not in (u, v)]))
        Q = PointSet(p for p in P if p.id != drop)
        assert empty_square_exists(Q[u], Q[v], Q)[0]
