"""L-infinity and L1 Delaunay triangulations from the empty-square rule."""
from __future__ import annotations

import functools
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .geometry import (AxisSquare, Point, PointSet, Side, Violation,
                       empty_square_exists, euclid, point_side_on,
                       require_general_position,
                       slide_window)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    witness: AxisSquare | None

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError("loop edge")
        if self.u > self.v:
            u, v = self.v, self.u
            object.__setattr__(self, "u", u)
            object.__setattr__(self, "v", v)

    @property
    def key(self) -> tuple[int, int]:
        return (self.u, self.v)


@dataclass(frozen=True)
class Triangle:
    vertices: tuple[int, int, int]
    circumsquare: AxisSquare | None


def rotate45(x, y):
    """Scaled 45 degree rotation ``(x, y) -> (x - y, x + y)``."""
    return x - y, x + y


class Triangulation:
    """Plane graph of Delaunay edges plus its triangular faces.

    ``points`` is the input point set; ``geometry`` is the point set in
    which witness squares are axis-parallel (the same object for the
    L-infinity triangulation, the rotated copy for L1).
    """

    def __init__(self, points: PointSet, edges: Iterable[Edge],
                 triangles: Iterable[Triangle], metric: str = "linf",
                 geometry: PointSet | None = None):
        self.points = points
        self.geometry = points if geometry is None else geometry
        self.metric = metric
        self._edges = {e.key: e for e in edges}
        self.triangles = tuple(triangles)
        nbrs: dict[int, list[int]] = {pid: [] for pid in points.ids}
        for u, v in self._edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.adjacency = {k: tuple(sorted(v)) for k, v in nbrs.items()}
        self._third: dict[tuple[int, int], int] = {}
        for t in self.triangles:
            a, b, c = t.vertices
            self._third[(a, b)] = c
            self._third[(b, c)] = a
            self._third[(c, a)] = b

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(self._edges.values())

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self._edges)

    def edge(self, u, v) -> Edge:
        return self._edges[(u, v) if u < v else (v, u)]

    def has_edge(self, u, v) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edges

    def third_vertex(self, u, v) -> int | None:
        """Vertex ``w`` such that ``(u, v, w)`` is a counterclockwise
        triangle, or None when ``uv`` borders an outer face."""
        return self._third.get((u, v))

    def neighbors(self, v) -> tuple[int, ...]:
        return self.adjacency[v]

    @functools.cached_property
    def lengths(self) -> dict[tuple[int, int], float]:
        """Euclidean length of every edge, keyed by sorted id pair."""
        P = self.points
        return {k: euclid(P[k[0]], P[k[1]]) for k in self._edges}

    @functools.cached_property
    def _triangle_index(self) -> dict[frozenset, Triangle]:
        return {frozenset(t.vertices): t for t in self.triangles}

    def triangle(self, u, v, w) -> Triangle | None:
        return self._triangle_index.get(frozenset((u, v, w)))

    def length(self, u, v) -> float:
        return self.lengths[(u, v) if u < v else (v, u)]

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return (f"Triangulation(metric={self.metric!r}, n={len(self.points)},"
                f" edges={len(self._edges)}, triangles={len(self.triangles)})")


# ----------------------------------------------------------------------------
# construction


def triangulate_linf(P: PointSet, *, check: bool = True) -> Triangulation:
    """L-infinity Delaunay triangulation of ``P``.

    An edge joins ``u`` and ``v`` iff some axis-parallel square has both on
    its boundary and an empty interior.
    """
    if len(P) < 2:
        raise ValueError("need at least two points")
    if check:
        require_general_position(P)
    edges = [Edge(u, v, w) for (u, v), w in _delaunay_edges(P).items()]
    triangles = _faces_to_triangles(P, [e.key for e in edges], strict=True)
    return Triangulation(P, edges, triangles, metric="linf")


def triangulate_l1(P: PointSet, *, check: bool = True) -> Triangulation:
    """L1 Delaunay triangulation, built as the L-infinity triangulation of
    the rotated set. Witness squares are reported in rotated coordinates
    (``Triangulation.geometry``)."""
    if check:
        require_general_position(P)
    G = P.mapped(rotate45)
    T = triangulate_linf(G, check=check)
    return Triangulation(P, T.edges, T.triangles, metric="l1", geometry=G)


def triangulate(P: PointSet, metric: str = "linf", **kw) -> Triangulation:
    m = str(metric).lower()
    if m in ("linf", "l_inf", "inf"):
        return triangulate_linf(P, **kw)
    if m in ("l1", "l_1"):
        return triangulate_l1(P, **kw)
    raise ValueError(f"unsupported metric {metric!r}")


def _delaunay_edges(P: PointSet) -> dict[tuple[int, int], AxisSquare]:
    d = P.scale
    ic = P.int_coords
    out = {}
    for transposed in (False, True):
        coords = ic if not transposed else \
            {k: (y, x) for k, (x, y) in ic.items()}
        for u, v, below, above in _box_empty_pairs(coords):
            (ux, uy), (vx, vy) = coords[u], coords[v]
            w, h = vx - ux, abs(vy - uy)
            if w < h or (transposed and w == h):
                continue
            t = slide_window(ux, uy, vx, vy, below, above)
            if t is None:
                continue
            west, south = (ux, t) if not transposed else (t, ux)
            key = (u, v) if u < v else (v, u)
            out[key] = AxisSquare(Fraction(west, d), Fraction(south, d),
                                  Fraction(w, d))
    return out


def _box_empty_pairs(coords: dict[int, tuple[int, int]]):
    """Pairs ``(u, v)`` with ``x_u < x_v`` and an empty open bounding box.

    A minimal witness square holds the open bounding box of its pair in
    its interior, so only these pairs can be edges. Also yields, for each
    pair, the highest ordinate under the box and the lowest over it among
    points strictly between u and v in x (None if absent). Ranks decide
    the box test exactly; a float prefilter only drops pairs that are far
    from admitting a free minimal square.
    """
    ids = list(coords)
    n = len(ids)
    xorder = sorted(range(n), key=lambda i: coords[ids[i]][0])
    yorder = sorted(range(n), key=lambda i: coords[ids[i]][1])
    yrank = np.empty(n, dtype=np.int64)
    yrank[np.array(yorder, dtype=np.int64)] = np.arange(n)
    yvals = [coords[ids[i]][1] for i in yorder]
    ranks = yrank[np.array(xorder, dtype=np.int64)]
    fx = np.array([float(coords[ids[i]][0]) for i in xorder])
    fy = np.array([float(coords[ids[i]][1]) for i in xorder])
    fyv = np.array([float(v) for v in yvals] + [np.inf, -np.inf])
    span = max(np.ptp(fx), np.ptp(fy), 1.0)
    slack = 1e-9 * span
    for a in range(n - 1):
        r0 = ranks[a]
        rest = ranks[a + 1:]
        up = rest > r0
        lo_up = np.minimum.accumulate(np.where(up, rest, n))
        hi_dn = np.maximum.accumulate(np.where(up, -1, rest))
        prev_up = np.concatenate(([n], lo_up[:-1]))
        prev_dn = np.concatenate(([-1], hi_dn[:-1]))
        ok = (rest < prev_up) & (rest > prev_dn)
        # float prefilter of slide_window on x-dominant pairs
        L = fx[a + 1:] - fx[a]
        ry = fy[a + 1:]
        miny = np.minimum(ry, fy[a])
        maxy = np.maximum(ry, fy[a])
        lo = np.maximum(maxy - L, np.where(prev_dn >= 0, fyv[prev_dn], -np.inf))
        hi = np.minimum(miny, np.where(prev_up < n, fyv[prev_up], np.inf) - L)
        ok &= (L >= (maxy - miny) - slack) & (lo <= hi + slack)
        u = ids[xorder[a]]
        for b in np.nonzero(ok)[0].tolist():
            pu, pd = int(prev_up[b]), int(prev_dn[b])
            yield (u, ids[xorder[a + 1 + b]],
                   yvals[pd] if pd >= 0 else None,
                   yvals[pu] if pu < n else None)


def _ccw_neighbors(P: PointSet, pairs) -> dict[int, list[int]]:
    ic = P.int_coords
    nbrs: dict[int, list[int]] = {pid: [] for pid in P.ids}
    for u, v in pairs:
        nbrs[u].append(v)
        nbrs[v].append(u)
    for c, lst in nbrs.items():
        cx, cy = ic[c]
        vec = {w: (ic[w][0] - cx, ic[w][1] - cy) for w in lst}
        lst.sort(key=functools.cmp_to_key(
            lambda p, q: _angle_cmp(vec[p], vec[q])))
    return nbrs


def _angle_cmp(a, b) -> int:
    ha = 0 if (a[1] > 0 or (a[1] == 0 and a[0] > 0)) else 1
    hb = 0 if (b[1] > 0 or (b[1] == 0 and b[0] > 0)) else 1
    if ha != hb:
        return ha - hb
    cross = a[0] * b[1] - a[1] * b[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _walk_faces(P: PointSet, pairs) -> list[list[int]]:
    """Faces of the plane graph, each as the vertex cycle with the face on
    the left; bounded faces come out counterclockwise."""
    nbrs = _ccw_neighbors(P, pairs)
    pos = {c: {w: i for i, w in enumerate(lst)} for c, lst in nbrs.items()}
    seen = set()
    faces = []
    for u, v in pairs:
        for start in ((u, v), (v, u)):
            if start in seen:
                continue
            face = []
            a, b = start
            while (a, b) not in seen:
                seen.add((a, b))
                face.append(a)
                lst = nbrs[b]
                c = lst[pos[b][a] - 1]
                a, b = b, c
            faces.append(face)
    return faces


def _signed_area2(P: PointSet, cycle) -> int:
    ic = P.int_coords
    s = 0
    for i in range(len(cycle)):
        x0, y0 = ic[cycle[i]]
        x1, y1 = ic[cycle[(i + 1) % len(cycle)]]
        s += x0 * y1 - x1 * y0
    return s


def _faces_to_triangles(P: PointSet, pairs, strict: bool) -> list[Triangle]:
    out = []
    for face in _walk_faces(P, pairs):
        if len(face) != 3 or _signed_area2(P, face) <= 0:
            if strict and _signed_area2(P, face) > 0:
                raise RuntimeError(f"bounded face {face} is not a triangle")
            continue
        sq = circumsquare(P, face)
        if sq is None and strict:
            raise RuntimeError(f"triangle {face} has no empty circumsquare")
        i = face.index(min(face))
        out.append(Triangle(tuple(face[i:] + face[:i]), sq))
    return out


def circumsquare_candidates(pts) -> list[AxisSquare]:
    """Squares with the three given points on three different sides."""
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    W = max(xs) - min(xs)
    H = max(ys) - min(ys)
    s = max(W, H)
    if s <= 0:
        return []
    out = []
    for X in (min(xs), max(xs) - s):
        for Y in (min(ys), max(ys) - s):
            sq = AxisSquare(X, Y, s)
            if sq in out:
                continue
            labels = [point_side_on(sq, p) for p in pts]
            if all(labels) and distinct_side_assignment(labels) is not None:
                out.append(sq)
    return out


def distinct_side_assignment(labels) -> tuple[Side, ...] | None:
    """Pick one side per point so that all picks differ, or None."""
    for combo in itertools.product(*[sorted(lbl) for lbl in labels]):
        if len(set(combo)) == len(combo):
            return combo
    return None


def circumsquare(P: PointSet, tri) -> AxisSquare | None:
    """The empty circumscribing square of triangle ``tri`` (ids in ``P``)."""
    pts = [P[i].xy for i in tri]
    empty = [sq for sq in circumsquare_candidates(pts)
             if _square_interior_empty(P, sq)]
    if len(empty) == 1:
        return empty[0]
    if len(empty) > 1:
        logger.warning("triangle %s has %d empty circumsquares", tri, len(empty))
        return empty[0]
    return None


def _square_interior_empty(P: PointSet, sq: AxisSquare) -> bool:
    d = P.scale
    X, Y, s = (int(c * d) for c in (sq.west, sq.south, sq.side))
    return P.index.open_box_empty(X, X + s, Y, Y + s)


# ----------------------------------------------------------------------------
# validation


def validate_triangulation(T: Triangulation) -> list[Violation]:
    """Re-check witnesses, circumsquares, planarity and Euler's relation."""
    G = T.geometry
    out: list[Violation] = []
    for e in T.edges:
        w = e.witness
        if w is None:
            out.append(Violation("missing-witness", e.key))
            continue
        if not (w.on_boundary(G[e.u]) and w.on_boundary(G[e.v])):
            out.append(Violation("witness-boundary", e.key))
        if not _square_interior_empty(G, w):
            out.append(Violation("non-empty-witness", e.key))
    for t in T.triangles:
        sq = t.circumsquare
        if sq is None:
            out.append(Violation("missing-circumsquare", t.vertices))
            continue
        labels = [point_side_on(sq, G[i]) for i in t.vertices]
        if not all(labels) or distinct_side_assignment(labels) is None:
            out.append(Violation("circumsquare-sides", t.vertices))
        if not _square_interior_empty(G, sq):
            out.append(Violation("non-empty-circumsquare", t.vertices))
        elif sum(_square_interior_empty(G, c) for c in
                 circumsquare_candidates([G[i].xy for i in t.vertices])) > 1:
            out.append(Violation("ambiguous-circumsquare", t.vertices))
        for a, b in zip(t.vertices, t.vertices[1:] + t.vertices[:1]):
            if not T.has_edge(a, b):
                out.append(Violation("triangle-edge-missing", (a, b)))
    crossings = crossing_edge_pairs(G, list(T.edge_set()))
    for e1, e2 in crossings:
        out.append(Violation("planarity", e1 + e2))
    if not crossings:
        out.extend(_face_violations(T))
    return out


def _face_violations(T: Triangulation) -> list[Violation]:
    G = T.geometry
    pairs = list(T.edge_set())
    faces = _walk_faces(G, pairs)
    V, E = len(G), len(pairs)
    isolated = sum(1 for v in G.ids if not T.adjacency[v])
    comps = _components(G.ids, pairs)
    # isolated vertices contribute no face in the walk but one component
    F = len(faces) + (1 if E == 0 else 0)
    out = []
    if comps > 1:
        out.append(Violation("disconnected", (comps,)))
    if V - E + F != 1 + comps and not (E == 0 and isolated == V):
        out.append(Violation("euler", (V, E, F)))
    have = {frozenset(t.vertices) for t in T.triangles}
    for f in faces:
        if _signed_area2(G, f) > 0:
            if len(f) != 3:
                out.append(Violation("non-triangular-face", tuple(f)))
            elif frozenset(f) not in have:
                out.append(Violation("missing-triangle", tuple(f)))
    return out


def _components(ids, pairs) -> int:
    parent = {i: i for i in ids}

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for u, v in pairs:
        parent[find(u)] = find(v)
    return len({find(i) for i in ids})


def crossing_edge_pairs(P: PointSet, pairs) -> list[tuple[tuple, tuple]]:
    """Edge pairs whose segments meet anywhere other than a shared endpoint."""
    ic = P.int_coords
    out = []
    segs = [(e, ic[e[0]], ic[e[1]]) for e in pairs]
    segs.sort(key=lambda s: min(s[1][0], s[2][0]))
    for i, (e1, p1, q1) in enumerate(segs):
        xmax = max(p1[0], q1[0])
        for e2, p2, q2 in segs[i + 1:]:
            if min(p2[0], q2[0]) > xmax:
                break
            if _segments_conflict(e1, p1, q1, e2, p2, q2):
                out.append((e1, e2))
    return out


def _orient(p, q, r) -> int:
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def _on_segment(p, q, r) -> bool:
    # r collinear with pq; is it within the closed segment?
    return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


def _segments_conflict(e1, p1, q1, e2, p2, q2) -> bool:
    shared = set(e1) & set(e2)
    if len(shared) == 2:
        return False
    o1 = _orient(p1, q1, p2)
    o2 = _orient(p1, q1, q2)
    o3 = _orient(p2, q2, p1)
    o4 = _orient(p2, q2, q1)
    if shared:
        # sharing one endpoint: conflict only if they overlap collinearly
        if o1 == 0 and o2 == 0:
            other2 = q2 if e2.index(next(iter(shared))) == 0 else p2
            other1 = q1 if e1.index(next(iter(shared))) == 0 else p1
            c = p1 if e1.index(next(iter(shared))) == 0 else q1
            v1 = (other1[0] - c[0], other1[1] - c[1])
            v2 = (other2[0] - c[0], other2[1] - c[1])
            return v1[0] * v2[0] + v1[1] * v2[1] > 0
        return False
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    if o1 == 0 and _on_segment(p1, q1, p2):
        return True
    if o2 == 0 and _on_segment(p1, q1, q2):
        return True
    if o3 == 0 and _on_segment(p2, q2, p1):
        return True
    if o4 == 0 and _on_segment(p2, q2, q1):
        return True
    return False


def assemble(points: PointSet, pairs, metric: str = "linf",
             geometry: PointSet | None = None) -> Triangulation:
    """Build a :class:`Triangulation` from an explicit edge list.

    Each edge gets an empty witness square when one exists and otherwise
    the lowest minimal square through its ends, so that
    :func:`validate_triangulation` can judge hand-made graphs.
    """
    G = points if geometry is None else geometry
    edges = []
    for u, v in pairs:
        ok, w = empty_square_exists(G[u], G[v], G)
        edges.append(Edge(u, v, w if ok else
                          _lowest_minimal_square(G[u], G[v])))
    tris = _faces_to_triangles(G, [e.key for e in edges], strict=False)
    tris = [t if t.circumsquare is not None else
            Triangle(t.vertices, _first_candidate(G, t.vertices))
            for t in tris]
    return Triangulation(points, edges, tris, metric=metric, geometry=geometry)


def _first_candidate(G, tri):
    c = circumsquare_candidates([G[i].xy for i in tri])
    return c[0] if c else None


def _lowest_minimal_square(u: Point, v: Point) -> AxisSquare:
    w, h = abs(u.x - v.x), abs(u.y - v.y)
    L = max(w, h)
    return AxisSquare(max(u.x, v.x) - L, max(u.y, v.y) - L, L)
