import json
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from linf_spanner import (AxisSquare, PointSet, canonical_frame,
                          classify_crossing_edges, crossing_sequence,
                          generate_chew_family, lemma_violations,
                          maximal_high_path, maximal_low_path,
                          monotone_extension, potential_status,
                          random_pointset, rectangle_empty, route,
                          triangulate)
from linf_spanner import formats
from linf_spanner.router import (CASES, DegenerateSegment, RouteError,
                                 structural_violations)
from linf_spanner.spanner import distance_matrix, shortest_paths_from

from conftest import general_position_sets

SQ2 = math.sqrt(2)


class TestFrame:
    def test_identity(self):
        f = canonical_frame((0, 0), (3, 1))
        assert (f.swap, f.sx, f.sy) == (False, 1, 1)
        assert f.apply((3, 1)) == (3, 1)

    def test_swap(self):
        f = canonical_frame((0, 0), (1, 3))
        assert f.swap and f.apply((1, 3)) == (3, 1)

    def test_translate_reflect(self):
        f = canonical_frame((2, 2), (-1, 1))
        x, y = f.apply((-1, 1))
        assert f.apply((2, 2)) == (0, 0)
        assert (x, y) == (3, 1) and 0 < y <= x
        assert f.inverse((x, y)) == (-1, 1)

    def test_coincident(self):
        with pytest.raises(ValueError):
            canonical_frame((1, 1), (1, 1))

    @given(st.tuples(st.integers(-50, 50), st.integers(-50, 50)),
           st.tuples(st.integers(-50, 50), st.integers(-50, 50)),
           st.tuples(st.integers(-50, 50), st.integers(-50, 50)))
    def test_isometry(self, a, b, p):
        if a == b:
            return
        f = canonical_frame(a, b)
        x, y = f.apply(b)
        assert 0 <= y <= x
        q = f.apply(p)
        assert max(abs(q[0] - x), abs(q[1] - y)) == \
            max(abs(p[0] - b[0]), abs(p[1] - b[1]))
        assert f.inverse(q) == p


class TestSixPointCrossing:
    @pytest.fixture
    def T(self, six_points):
        return triangulate(six_points)

    def test_labels(self, T):
        seq = crossing_sequence(T, 0, 1)
        assert seq.k == 4
        assert seq.h == [0, 2, 4, 4, 1]
        assert seq.l == [0, 3, 3, 5, 5]
        # h and l change in turn: h_1, l_1 = l_2, h_2 = h_3, l_3
        assert seq.l[1] == seq.l[2] and seq.h[2] == seq.h[3]

    def test_squares(self, T):
        seq = crossing_sequence(T, 0, 1)
        got = [(s.west, s.south, s.side) for s in
               (seq.frame.map_square(T.triangle(*t).circumsquare)
                for t in seq.triangles[1:])]
        assert got == [(0, F(-7, 20), F(3, 2)), (F(1, 2), F(-7, 20), F(9, 4)),
                       (1, F(-11, 10), 3), (2, F(-17, 20), 4)]

    def test_edge_classes(self, T):
        labs = {e.index: (e.case, e.label)
                for e in classify_crossing_edges(crossing_sequence(T, 0, 1))}
        assert labs[2] == ("a", "WN")
        assert labs[3] == ("b", "WE")

    def test_structure_and_route(self, T):
        assert rectangle_empty(T.points, 0, 1)
        seq = crossing_sequence(T, 0, 1)
        assert structural_violations(seq) == []
        C = route(T, 0, 1)
        assert C.root.case == "case2-inductive-high"
        assert C.validate(T) == []


def test_chew_crossing_ladder():
    fam = generate_chew_family(12)
    T = triangulate(fam.points)
    seq = crossing_sequence(T, fam.a, fam.b)
    assert set(seq.h) <= set(fam.p_ids) | {fam.b}
    assert set(seq.l) <= set(fam.q_ids) | {fam.a}
    labs = classify_crossing_edges(seq)
    assert [e.label for e in labs] == ["SE", "WN"] * 9
    assert [e.case for e in labs] == ["b", "a"] * 9


def test_crossing_rejects_edges():
    T = triangulate(random_pointset(8, 0))
    u, v = sorted(T.edge_set())[0]
    with pytest.raises(ValueError):
        crossing_sequence(T, u, v)


def test_vertex_on_segment():
    P = PointSet.from_coords([(0, 0), (4, 2), (2, 1), (1, 5), (3, -3)])
    T = triangulate(P)
    assert not T.has_edge(0, 1)
    with pytest.raises(DegenerateSegment):
        crossing_sequence(T, 0, 1)


class TestRectangle:
    def test_two_points(self):
        assert rectangle_empty(PointSet.from_coords([(0, 0), (3, 1)]), 0, 1)

    def test_centre(self):
        P = PointSet.from_coords([(0, 0), (4, 2), (2, 1)])
        assert not rectangle_empty(P, 0, 1)


class TestPotential:
    def _seq(self, seed, a, b):
        T = triangulate(random_pointset(10, seed))
        sp = shortest_paths_from(T, a)
        return T, crossing_sequence(T, a, b), sp.dist

    def test_first_square(self):
        T, seq, d = self._seq(0, 0, 2)
        s = potential_status(seq, 1, d)
        assert s.potential_ok and s.potential_value <= 4 * seq.unit(seq.xs[1])

    def test_propagation_and_promising(self):
        checked = 0
        for seed in range(15):
            T = triangulate(random_pointset(9, seed))
            for a in T.points.ids:
                d = shortest_paths_from(T, a).dist
                for b in T.points.ids:
                    if a == b or T.has_edge(a, b) or \
                            not rectangle_empty(T.points, a, b):
                        continue
                    seq = crossing_sequence(T, a, b)
                    j = seq.first_inductive()
                    for i in range(1, (seq.k if j is None else j) + 1):
                        s = potential_status(seq, i, d)
                        assert s.potential_ok
                        for c in s.promising:
                            xc = seq.unit(seq.coords[c][0])
                            assert d[c] <= 2 * xc + 1e-9
                        checked += 1
        assert checked > 100

    def test_index_range(self):
        T, seq, d = self._seq(0, 0, 2)
        with pytest.raises(IndexError):
            potential_status(seq, 0, d)


class TestPaths:
    def test_promising_end_gives_singleton(self):
        T = triangulate(random_pointset(10, 0))
        seq = crossing_sequence(T, 0, 2)
        for j in range(1, seq.k + 1):
            for fn, lab in ((maximal_high_path, seq.h),
                            (maximal_low_path, seq.l)):
                path, start = fn(seq, j)
                if seq.promising(j, lab[j]):
                    assert path == [lab[j]] and start == j
                assert path[-1] == lab[j]
                s0, s1 = seq.coords[path[0]], seq.coords[path[-1]]
                ln = sum(T.length(u, v) for u, v in zip(path, path[1:]))
                bound = seq.unit(s1[0] - s0[0]) + seq.unit(abs(s1[1] - s0[1]))
                assert ln <= bound + 1e-12

    def test_chew_high_path_on_p_chain(self):
        fam = generate_chew_family(12)
        T = triangulate(fam.points)
        seq = crossing_sequence(T, fam.a, fam.b)
        path, _ = maximal_high_path(seq, seq.k - 1)
        assert set(path) <= set(fam.p_ids)
        assert path == sorted(path)


class TestMonotoneExtension:
    def test_good_position_is_identity(self):
        T = triangulate(random_pointset(10, 0))
        seq = crossing_sequence(T, 0, 2)
        j = seq.k
        assert monotone_extension(seq, j, "high") == (j, [seq.h[j]], [])

    def test_high_walk(self):
        T = triangulate(random_pointset(10, 11))
        seq = crossing_sequence(T, 4, 7)
        j = seq.first_inductive()
        c = seq.inductive_point(j)
        assert c == seq.h[j]
        m, path, tags = monotone_extension(seq, j, "high")
        assert m > j and len(path) > 1 and set(tags) == {"NE"}
        (cx, cy), (ex, ey) = seq.coords[path[0]], seq.coords[path[-1]]
        assert seq.x - ex >= abs(seq.y - ey)
        ln = sum(T.length(u, v) for u, v in zip(path, path[1:]))
        assert ln <= seq.unit(ex - cx) + seq.unit(cy - ey) + 1e-12

    def test_low_walk_stalls_at_last_square(self):
        T = triangulate(random_pointset(10, 28))
        seq = crossing_sequence(T, 2, 7)
        j = seq.first_inductive()
        m, path, tags = monotone_extension(seq, j, "low")
        assert m == seq.k and path[-1] == seq.l[seq.k]
        assert set(tags) <= {"SE"}
        C = route(T, 2, 7)
        assert C.root.details["closing_edge"] == [seq.l[seq.k], 7]
        assert C.validate(T) == []


class TestRoute:
    def test_direct_edge(self):
        P = PointSet.from_coords([(0, 0), (3, 1)])
        C = route(triangulate(P), 0, 1)
        assert C.root.case == "direct-edge"
        assert C.path_vertices == (0, 1)
        assert C.slack == pytest.approx((1 + SQ2) * 3 + 1 - math.sqrt(10))

    def test_chew_endpoints(self):
        fam = generate_chew_family(141)
        T = triangulate(fam.points)
        C = route(T, fam.a, fam.b)
        dT = shortest_paths_from(T, fam.a).dist[fam.b]
        assert dT - 1e-12 <= C.length <= 2 * SQ2
        assert C.length == pytest.approx(
            math.hypot(SQ2 - 2 * float(fam.delta), float(fam.delta))
            + math.hypot(1 - float(fam.delta), 1 - 2 * float(fam.delta)),
            abs=1e-9)
        assert C.validate(T) == []

    @pytest.mark.parametrize("metric", ["linf", "l1"])
    def test_all_pairs(self, metric):
        for seed in range(6):
            T = triangulate(random_pointset(12, seed), metric)
            ids, D = distance_matrix(T)
            pos = {v: i for i, v in enumerate(ids)}
            for a in ids:
                for b in ids:
                    if a == b:
                        continue
                    C = route(T, a, b)
                    assert C.root.case in CASES
                    assert C.length >= D[pos[a], pos[b]] - 1e-12
                    assert C.slack >= -1e-9
                    assert C.min_slack() >= -1e-9
                    assert C.validate(T) == []

    def test_tampered_certificate_fails(self):
        T = triangulate(random_pointset(10, 3))
        C = route(T, 0, 5)
        C.length *= 1.5
        assert C.validate(T)

    def test_json_round_trip(self, tmp_path):
        T = triangulate(random_pointset(10, 5))
        C = route(T, 1, 8)
        doc = formats.certificate_to_json(C, T)
        p = tmp_path / "c.json"
        formats.write_json(doc, p)
        C2, P2 = formats.certificate_from_json(formats.read_json(p))
        assert C2.path_vertices == C.path_vertices
        assert C2.length == C.length and C2.x == C.x
        assert [q.slack for s in C2.root.walk() for q in s.inequalities] == \
            [q.slack for s in C.root.walk() for q in s.inequalities]
        assert C2.validate(triangulate(P2)) == []
        assert sum(doc["edge_lengths"]) == pytest.approx(C.length, rel=1e-12)

    def test_unknown_ids(self):
        T = triangulate(random_pointset(5, 0))
        with pytest.raises(KeyError):
            route(T, 0, 99)
        with pytest.raises(ValueError):
            route(T, 1, 1)


@settings(max_examples=40, deadline=None)
@given(general_position_sets(min_size=3, max_size=12), st.data())
def test_route_and_lemmas_property(P, data):
    T = triangulate(P)
    ids = P.ids
    a = data.draw(st.sampled_from(ids))
    b = data.draw(st.sampled_from([i for i in ids if i != a]))
    try:
        C = route(T, a, b)
    except DegenerateSegment:
        return
    assert C.validate(T) == []
    d = shortest_paths_from(T, a)
    assert C.length >= d.dist[b] - 1e-12 * P.extent
    assert lemma_violations(T, a, b, d.dist) == []
