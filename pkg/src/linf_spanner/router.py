"""Certified routing: the inductive proof of the (1+sqrt2)x + y bound run as
an algorithm.

Every call works in a canonical frame where ``a`` is the origin and
``b = (x, y)`` with ``0 < y <= x``. Coordinates inside a frame are exact
integers (the triangulation's geometry scaled by ``PointSet.scale``);
lengths are floats in geometry units and are converted back to input
units only when a certificate is assembled.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .delaunay import Triangulation
from .geometry import (AxisSquare, Point, PointSet, Side, Slope,
                       classify_slope, point_side_on)

SQRT2 = math.sqrt(2.0)
COEFF = 1.0 + SQRT2
TOL = 1e-9

CASES = ("direct-edge", "case1-regionA", "case1-regionB", "case1-regionC",
         "case2-no-inductive", "case2-inductive-high", "case2-inductive-low")


class RouteError(RuntimeError):
    """An inequality of the proof failed, or the construction got stuck."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class DegenerateSegment(ValueError):
    pass


# ----------------------------------------------------------------------------
# frames


@dataclass(frozen=True)
class Frame:
    """``p -> R(p - origin)`` with ``R`` an optional axis swap followed by
    axis reflections. An isometry for L2 and Linf."""

    origin: tuple[Fraction, Fraction]
    swap: bool
    sx: int
    sy: int

    @property
    def det(self) -> int:
        return self.sx * self.sy * (-1 if self.swap else 1)

    def apply(self, p) -> tuple[Fraction, Fraction]:
        x, y = _xy(p)
        dx, dy = x - self.origin[0], y - self.origin[1]
        if self.swap:
            dx, dy = dy, dx
        return self.sx * dx, self.sy * dy

    def inverse(self, q) -> tuple[Fraction, Fraction]:
        dx, dy = self.sx * q[0], self.sy * q[1]
        if self.swap:
            dx, dy = dy, dx
        return dx + self.origin[0], dy + self.origin[1]

    def map_square(self, sq: AxisSquare) -> AxisSquare:
        (x0, y0), (x1, y1) = (self.apply((sq.west, sq.south)),
                              self.apply((sq.east, sq.north)))
        return AxisSquare(min(x0, x1), min(y0, y1), sq.side)

    def to_json(self) -> dict:
        return {"origin": [_frac_pair(c) for c in self.origin],
                "swap": self.swap, "sx": self.sx, "sy": self.sy}

    @classmethod
    def from_json(cls, d) -> "Frame":
        return cls(tuple(Fraction(*c) for c in d["origin"]), bool(d["swap"]),
                   int(d["sx"]), int(d["sy"]))


def _frac_pair(c: Fraction):
    c = Fraction(c)
    return [c.numerator, c.denominator]


def _xy(p):
    if isinstance(p, Point):
        return p.x, p.y
    return p[0], p[1]


def canonical_frame(a, b) -> Frame:
    """Frame taking ``a`` to the origin and ``b`` to ``(x, y)``, ``0 <= y <= x``."""
    ax, ay = _xy(a)
    bx, by = _xy(b)
    dx, dy = bx - ax, by - ay
    if dx == 0 and dy == 0:
        raise ValueError("a and b coincide")
    swap = abs(dy) > abs(dx)
    if swap:
        dx, dy = dy, dx
    return Frame((Fraction(ax), Fraction(ay)), swap,
                 -1 if dx < 0 else 1, -1 if dy < 0 else 1)


class _IntFrame:
    """Frame acting on the integer coordinates of a geometry point set."""

    def __init__(self, G: PointSet, a: int, b: int):
        self.ic = G.int_coords
        self.scale = G.scale
        ax, ay = self.ic[a]
        self.frame = canonical_frame(
            (Fraction(ax, self.scale), Fraction(ay, self.scale)),
            (Fraction(self.ic[b][0], self.scale),
             Fraction(self.ic[b][1], self.scale)))
        self.origin = (ax, ay)
        self._cache: dict[int, tuple[int, int]] = {}

    def __getitem__(self, pid) -> tuple[int, int]:
        c = self._cache.get(pid)
        if c is None:
            c = self.map_int(self.ic[pid])
            self._cache[pid] = c
        return c

    def map_int(self, q) -> tuple[int, int]:
        f = self.frame
        dx, dy = q[0] - self.origin[0], q[1] - self.origin[1]
        if f.swap:
            dx, dy = dy, dx
        return f.sx * dx, f.sy * dy

    def square(self, sq: AxisSquare) -> AxisSquare:
        d = self.scale
        X, Y, s = (int(c * d) for c in (sq.west, sq.south, sq.side))
        (x0, y0), (x1, y1) = self.map_int((X, Y)), self.map_int((X + s, Y + s))
        return AxisSquare(min(x0, x1), min(y0, y1), s)


def rectangle_empty(P: PointSet, a: int, b: int) -> bool:
    """True iff the open axis-parallel rectangle spanned by ``a``, ``b``
    holds no point of ``P``."""
    return not _rectangle_ids(P, a, b)


def _rectangle_ids(P: PointSet, a: int, b: int) -> list[int]:
    (ax, ay), (bx, by) = P.int_coords[a], P.int_coords[b]
    return P.index.open_box_ids(min(ax, bx), max(ax, bx),
                                min(ay, by), max(ay, by))


# ----------------------------------------------------------------------------
# crossing sequence


@dataclass
class CrossingSequence:
    """Triangles met by segment ``[ab]``, in frame coordinates.

    Index ``i`` runs over ``0..k``; ``triangles[i]``, ``squares[i]`` and
    ``xs[i]`` are None at ``i = 0``. Integer coordinates and squares are in
    frame units (geometry units times ``scale``).
    """

    a: int
    b: int
    frame: Frame
    scale: int
    coords: dict[int, tuple[int, int]]
    triangles: list[tuple[int, int, int] | None]
    h: list[int]
    l: list[int]
    squares: list[AxisSquare | None]
    xs: list[int]
    shrink: float = 1.0

    @property
    def k(self) -> int:
        return len(self.h) - 1

    @property
    def x(self) -> int:
        return self.coords[self.b][0]

    @property
    def y(self) -> int:
        return self.coords[self.b][1]

    def unit(self, v) -> float:
        """Frame-unit quantity in geometry units."""
        return float(Fraction(v) / self.scale)

    def sides(self, i: int, pid: int) -> frozenset[Side]:
        return point_side_on(self.squares[i], self.coords[pid])

    def promising(self, i: int, pid: int) -> bool:
        return i > 0 and Side.E in self.sides(i, pid)

    def gentle(self, i: int) -> bool:
        return classify_slope(self.coords[self.h[i]],
                              self.coords[self.l[i]]) is Slope.GENTLE

    def inductive(self, i: int) -> bool:
        return i > 0 and self.gentle(i)

    def inductive_point(self, i: int) -> int | None:
        if not self.inductive(i):
            return None
        h, l = self.h[i], self.l[i]
        return h if self.coords[h][0] > self.coords[l][0] else l

    def first_inductive(self) -> int | None:
        for i in range(1, self.k + 1):
            if self.inductive(i):
                return i
        return None

    def above(self, pid: int) -> bool:
        return _orient((0, 0), self.coords[self.b], self.coords[pid]) > 0

    def square_units(self, i: int) -> AxisSquare:
        sq, d = self.squares[i], self.scale
        return AxisSquare(Fraction(sq.west) / d, Fraction(sq.south) / d,
                          Fraction(sq.side) / d)

    def d_S(self, i: int, p: int, q: int) -> int:
        """Clockwise boundary walk from ``p`` to ``q`` on ``S_i`` (frame units)."""
        sq = self.squares[i]
        return int((_param(sq, self.coords[q]) - _param(sq, self.coords[p]))
                   % (4 * sq.side))


def _param(sq: AxisSquare, p) -> Fraction:
    x, y = p
    s = sq.side
    sides = point_side_on(sq, p)
    if not sides:
        raise ValueError(f"{p} not on square boundary")
    if Side.N in sides:
        return x - sq.west
    if Side.E in sides:
        return s + (sq.north - y)
    if Side.S in sides:
        return 2 * s + (sq.east - x)
    return 3 * s + (y - sq.south)


def _orient(p, q, r) -> int:
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def crossing_sequence(T: Triangulation, a: int, b: int,
                      _frame: _IntFrame | None = None) -> CrossingSequence:
    if a == b:
        raise ValueError("a and b coincide")
    if T.has_edge(a, b):
        raise ValueError(f"({a},{b}) is an edge; use it directly")
    F = _frame or _IntFrame(T.geometry, a, b)
    A, B = F[a], F[b]

    def side(pid):
        o = _orient(A, B, F[pid])
        if o == 0:
            p = F[pid]
            if 0 < p[0] < B[0] or 0 < p[1] < B[1] or p == A or p == B:
                if pid not in (a, b):
                    raise DegenerateSegment(
                        f"vertex {pid} lies on segment ({a},{b})")
        return o

    first = None
    for u in T.neighbors(a):
        w = T.third_vertex(a, u)
        if w is None:
            continue
        # frame orientation flips with det; compare in the frame
        o1 = _orient(A, F[u], B) * T_det(F)
        o2 = _orient(A, B, F[w]) * T_det(F)
        if o1 > 0 and o2 > 0:
            first = (u, w)
            break
        if o1 == 0 and _between(A, B, F[u]):
            raise DegenerateSegment(f"vertex {u} lies on segment ({a},{b})")
    if first is None:
        raise RouteError(f"segment ({a},{b}) does not enter any triangle at {a}")
    u, w = first
    hs, ls = [a], [a]
    tris: list = [None]
    h, l = (u, w) if side(u) > 0 else (w, u)
    if side(h) <= 0 or side(l) >= 0:
        raise DegenerateSegment(f"first triangle of ({a},{b}) straddles badly")
    hs.append(h)
    ls.append(l)
    tris.append((a, u, w))
    prev = {a, u, w}
    for _ in range(2 * len(T.points) + 2):
        if h == b or l == b:
            break
        t1, t2 = T.third_vertex(h, l), T.third_vertex(l, h)
        nxt = t1 if t1 is not None and t1 not in prev else t2
        if nxt is None or nxt in prev:
            raise RouteError(f"segment ({a},{b}) leaves the triangulated "
                             f"region at edge ({h},{l})")
        tris.append((h, l, nxt))
        prev = {h, l, nxt}
        if nxt == b:
            hs.append(b)
            ls.append(l)
            break
        o = side(nxt)
        if o > 0:
            h = nxt
        elif o < 0:
            l = nxt
        else:
            raise DegenerateSegment(f"vertex {nxt} lies on segment ({a},{b})")
        hs.append(h)
        ls.append(l)
    else:  # pragma: no cover
        raise RouteError("crossing walk did not terminate")
    if hs[-1] != b:
        raise RouteError("crossing walk ended away from b")
    squares: list = [None]
    xs = [0]
    for tri in tris[1:]:
        t = T.triangle(*tri)
        if t is None or t.circumsquare is None:
            raise RouteError(f"triangle {tri} missing or has no square")
        sq = F.square(t.circumsquare)
        squares.append(sq)
        xs.append(int(sq.east))
    ids = set(hs) | set(ls)
    coords = {pid: F[pid] for pid in ids}
    return CrossingSequence(a, b, F.frame, F.scale, coords, tris, hs, ls,
                            squares, xs, _shrink(T))


def T_det(F: _IntFrame) -> int:
    return F.frame.det


def _between(A, B, p) -> bool:
    return (min(A[0], B[0]) < p[0] < max(A[0], B[0])
            or min(A[1], B[1]) < p[1] < max(A[1], B[1]))


def _shrink(T: Triangulation) -> float:
    return 1.0 if T.geometry is T.points else SQRT2


# ----------------------------------------------------------------------------
# structural lemma


_HIGH_OK = {"WN", "WE", "NE"}
_LOW_OK = {"WS", "WE", "SE"}


@dataclass(frozen=True)
class EdgeLabel:
    index: int
    case: str           # "a": h changes, "b": l changes
    edge: tuple[int, int]
    label: str | None   # e.g. "WN"; None when no admissible placement exists

    @property
    def ok(self) -> bool:
        return self.label is not None


def _labels(seq: CrossingSequence, i: int, first: int, second: int,
            other: int, high: bool) -> str | None:
    """Admissible side pair for the edge (first, second) in S_i."""
    opts = [sorted(seq.sides(i, p)) for p in (first, second, other)]
    allowed = _HIGH_OK if high else _LOW_OK
    banned_chain = Side.S if high else Side.N
    banned_other = Side.N if high else Side.S
    for s1, s2, s3 in itertools.product(*opts):
        if len({s1, s2, s3}) < 3:
            continue
        if banned_chain in (s1, s2) or s3 is banned_other:
            continue
        lab = s1.value + s2.value
        if lab in allowed:
            return lab
    return None


def classify_crossing_edges(seq: CrossingSequence) -> list[EdgeLabel]:
    """Side labels of the label-changing edge in every S_i, ``1 < i < k``."""
    out = []
    for i in range(2, seq.k):
        if seq.l[i] == seq.l[i - 1]:
            e = (seq.h[i - 1], seq.h[i])
            out.append(EdgeLabel(i, "a", e,
                                 _labels(seq, i, *e, seq.l[i], True)))
        else:
            e = (seq.l[i - 1], seq.l[i])
            out.append(EdgeLabel(i, "b", e,
                                 _labels(seq, i, *e, seq.h[i], False)))
    return out


def structural_violations(seq: CrossingSequence) -> list[str]:
    """Checks of the structure lemma for an empty rectangle R(a, b)."""
    out = []
    x, y = seq.x, seq.y
    if Side.W not in seq.sides(1, seq.a):
        out.append("a not on W side of S_1")
    if Side.E not in seq.sides(seq.k, seq.b):
        out.append("b not on E side of S_k")
    for i in range(1, seq.k):
        hx, hy = seq.coords[seq.h[i]]
        if not (0 < hx < x and hy > y):
            out.append(f"h_{i} not above R")
    for i in range(1, seq.k + 1):
        lx, ly = seq.coords[seq.l[i]]
        if not (0 < lx < x and ly < 0):
            out.append(f"l_{i} not below R")
    for lab in classify_crossing_edges(seq):
        if not lab.ok:
            out.append(f"edge {lab.edge} in S_{lab.index} has no admissible "
                       f"labels")
    return out


# ----------------------------------------------------------------------------
# potential, promising points, maximal paths


@dataclass(frozen=True)
class SquareStatus:
    index: int
    inductive: bool
    inductive_point: int | None
    potential_ok: bool
    potential_value: float
    potential_bound: float
    promising: frozenset[int]


def _oracle(dT):
    if callable(dT):
        return dT
    return lambda v: dT[v]


def potential_status(seq: CrossingSequence, i: int,
                     dT: Callable[[int], float] | Mapping[int, float]
                     ) -> SquareStatus:
    """Evaluate the potential of ``S_i`` with ``dT(v) = d_T(a, v)`` in input
    units."""
    if not 1 <= i <= seq.k:
        raise IndexError(i)
    d = _oracle(dT)
    h, l = seq.h[i], seq.l[i]
    value = (seq.shrink * (d(h) + d(l))
             + seq.unit(seq.d_S(i, h, l)))
    bound = 4 * seq.unit(seq.xs[i])
    prom = frozenset(c for c in (h, l) if seq.promising(i, c))
    return SquareStatus(i, seq.inductive(i), seq.inductive_point(i),
                        value <= bound + TOL * _extent(seq), value, bound,
                        prom)


def _extent(seq: CrossingSequence) -> float:
    return max(seq.unit(seq.x), 1e-300)


def _max_path(labels: list[int], seq: CrossingSequence,
              j: int) -> tuple[list[int], int]:
    start = j
    while start > 0 and not seq.promising(start, labels[start]):
        start -= 1
    return _dedup(labels[start:j + 1]), start


def _dedup(seq_ids):
    out = []
    for v in seq_ids:
        if not out or out[-1] != v:
            out.append(v)
    return out


def maximal_high_path(seq: CrossingSequence, j: int) -> tuple[list[int], int]:
    """Vertices of the maximal high path ending at ``h_j`` and its start
    index."""
    return _max_path(seq.h, seq, j)


def maximal_low_path(seq: CrossingSequence, j: int) -> tuple[list[int], int]:
    return _max_path(seq.l, seq, j)


def _good(seq: CrossingSequence, c: int) -> bool:
    cx, cy = seq.coords[c]
    return seq.x - cx >= abs(seq.y - cy)


def monotone_extension(seq: CrossingSequence, i: int, side: str
                       ) -> tuple[int, list[int], list[str]]:
    """Walk the high (or low) chain from index ``i`` until its point is in
    good position relative to ``b``.

    Returns the end index, the walked vertices and the side label of each
    traversed edge (each must be NE for high, SE for low). The low chain
    can run out at ``l_k = l_{k-1}`` while still in bad position; the walk
    then stops at index ``k`` and the caller closes with the edge
    ``(l_k, b)`` of ``T_k``.
    """
    labels = seq.h if side == "high" else seq.l
    want = "NE" if side == "high" else "SE"
    path = [labels[i]]
    tags = []
    j = i
    while not _good(seq, labels[j]):
        if j >= seq.k:
            break
        j += 1
        if labels[j] == labels[j - 1]:
            continue
        other = seq.l[j] if side == "high" else seq.h[j]
        tag = _labels(seq, j, labels[j - 1], labels[j], other,
                      side == "high")
        if tag != want:
            raise RouteError(f"edge ({labels[j - 1]},{labels[j]}) is "
                             f"{tag}, expected {want} in S_{j}")
        tags.append(tag)
        path.append(labels[j])
    return j, path, tags


def lemma_violations(T: Triangulation, a: int, b: int,
                     dT: Callable[[int], float] | Mapping[int, float]
                     ) -> list[str]:
    """Audit the lemmas of the empty-rectangle case for the pair (a, b).

    ``dT(v)`` must give the exact graph distance from ``a`` to ``v`` in
    input units. Returns an empty list when every checked statement holds;
    pairs that are edges or have a non-empty rectangle are not audited.
    """
    if T.has_edge(a, b) or not rectangle_empty(T.geometry, a, b):
        return []
    seq = crossing_sequence(T, a, b)
    d = _oracle(dT)
    out = list(structural_violations(seq))
    tol = TOL * _extent(seq)
    j = seq.first_inductive()
    last = seq.k if j is None else j
    for i in range(1, last + 1):
        stat = potential_status(seq, i, d)
        if not stat.potential_ok:
            out.append(f"S_{i} lacks potential: {stat.potential_value!r} > "
                       f"{stat.potential_bound!r}")
        for c in stat.promising:
            if seq.shrink * d(c) > 2 * seq.unit(seq.coords[c][0]) + tol:
                out.append(f"promising {c} in S_{i}: d_T > 2x_c")
    if j is None:
        return out
    c = seq.inductive_point(j)
    cx, cy = (seq.unit(v) for v in seq.coords[c])
    dc = seq.shrink * d(c)
    if c == seq.h[j]:
        if dc + (cy - seq.unit(seq.y)) > COEFF * cx + tol:
            out.append(f"inductive h_{j}: d_T + (y_h - y) > (1+sqrt2)x_h")
    elif dc - cy > COEFF * cx + tol:
        out.append(f"inductive l_{j}: d_T - y_l > (1+sqrt2)x_l")
    return out


# ----------------------------------------------------------------------------
# certificates


@dataclass
class Inequality:
    label: str
    bound: float
    value: float

    @property
    def slack(self) -> float:
        return self.bound - self.value

    def to_json(self) -> dict:
        return {"label": self.label, "bound": self.bound, "value": self.value,
                "slack": self.slack}


@dataclass
class RouteStep:
    case: str
    a: int
    b: int
    frame: Frame
    x: float
    y: float
    path: list[int]
    length: float
    inequalities: list[Inequality] = field(default_factory=list)
    children: list["RouteStep"] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def bound(self) -> float:
        return COEFF * self.x + self.y

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class RouteCertificate:
    """Path from ``a`` to ``b`` with the proof's inequalities.

    Step quantities are in geometry units; ``path.length``, ``bound`` and
    ``x``/``y`` of the certificate itself are in input units (they differ
    by ``shrink`` = sqrt2 for L1).
    """

    a: int
    b: int
    metric: str
    frame: Frame
    x: float
    y: float
    path_vertices: tuple[int, ...]
    length: float
    root: RouteStep
    shrink: float = 1.0
    extent: float = 1.0

    @property
    def bound(self) -> float:
        return COEFF * self.x + self.y

    @property
    def slack(self) -> float:
        return self.bound - self.length

    def min_slack(self) -> float:
        """Smallest recorded slack, normalised by the geometry extent."""
        out = self.slack * self.shrink / self.extent
        for st in self.root.walk():
            for q in st.inequalities:
                out = min(out, q.slack / self.extent)
        return out

    def validate(self, T: Triangulation, tol: float = TOL) -> list[str]:
        """Replay the path through ``T`` and recheck every slack."""
        errs = []
        vs = self.path_vertices
        if not vs or vs[0] != self.a or vs[-1] != self.b:
            errs.append("path does not join a and b")
        total = 0.0
        for u, v in zip(vs, vs[1:]):
            if not T.has_edge(u, v):
                errs.append(f"({u},{v}) is not an edge")
            else:
                total += T.length(u, v)
        if abs(total - self.length) > 1e-12 * max(1.0, total):
            errs.append(f"replayed length {total!r} != {self.length!r}")
        G = T.geometry
        ga, gb = G[self.a], G[self.b]
        dx, dy = abs(ga.x - gb.x), abs(ga.y - gb.y)
        x = float(max(dx, dy)) / self.shrink
        y = float(min(dx, dy)) / self.shrink
        if abs(x - self.x) > 1e-12 * max(1.0, x) or \
                abs(y - self.y) > 1e-12 * max(1.0, x):
            errs.append("recorded x, y do not match the points")
        if (self.bound - total) * self.shrink / self.extent < -tol:
            errs.append(f"length {total!r} exceeds bound {self.bound!r}")
        for st in self.root.walk():
            for q in st.inequalities:
                if q.slack / self.extent < -tol:
                    errs.append(f"{st.case} ({st.a},{st.b}): {q.label} "
                                f"slack {q.slack!r}")
            for ch in st.children:
                if not ch.x < st.x:
                    errs.append(f"child ({ch.a},{ch.b}) does not shrink the "
                                f"Linf distance of ({st.a},{st.b})")
            if st.path[0] != st.a or st.path[-1] != st.b:
                errs.append(f"step ({st.a},{st.b}) path has wrong ends")
            if (st.length - st.bound) / self.extent > tol:
                errs.append(f"step ({st.a},{st.b}) exceeds its bound")
        return errs


# ----------------------------------------------------------------------------
# the router


class _Router:
    def __init__(self, T: Triangulation):
        self.T = T
        self.G = T.geometry
        self.scale = self.G.scale
        self.extent = self.G.extent
        self.max_depth = max(4, len(self.G) ** 2)
        self._len: dict[tuple[int, int], float] = {}

    # lengths in geometry units
    def elen(self, u, v) -> float:
        key = (u, v) if u < v else (v, u)
        r = self._len.get(key)
        if r is None:
            if not self.T.has_edge(u, v):
                raise RouteError(f"({u},{v}) is not an edge")
            p, q = self.G[u], self.G[v]
            r = math.sqrt(float((p.x - q.x) ** 2 + (p.y - q.y) ** 2))
            self._len[key] = r
        return r

    def plen(self, path) -> float:
        return sum(self.elen(u, v) for u, v in zip(path, path[1:]))

    def check(self, step: RouteStep, label, bound, value):
        q = Inequality(label, float(bound), float(value))
        step.inequalities.append(q)
        if q.slack / self.extent < -TOL:
            raise RouteError(f"{label} fails for ({step.a},{step.b}): "
                             f"{value!r} > {bound!r}", trace=step)

    def route(self, a, b, depth=0) -> RouteStep:
        if depth > self.max_depth:
            raise RouteError(f"recursion depth exceeded at ({a},{b})")
        F = _IntFrame(self.G, a, b)
        X, Y = F[b]
        d = self.scale
        x, y = X / d, Y / d
        if self.T.has_edge(a, b):
            st = RouteStep("direct-edge", a, b, F.frame, x, y, [a, b],
                           self.elen(a, b))
            self.check(st, "d2(a,b) <= x + y", x + y, st.length)
            self.check(st, "length <= (1+sqrt2)x + y", st.bound, st.length)
            return st
        inside = _rectangle_ids(self.G, a, b)
        if inside:
            st = self._case1(a, b, F, x, y, inside, depth)
        else:
            st = self._case2(a, b, F, x, y, depth)
        self.check(st, "length <= (1+sqrt2)x + y", st.bound, st.length)
        return st

    def _child(self, st: RouteStep, u, v, depth) -> RouteStep:
        ch = self.route(u, v, depth + 1)
        st.children.append(ch)
        self.check(st, f"Linf({u},{v}) < Linf(a,b)", st.x, ch.x)
        if not ch.x < st.x:
            raise RouteError(f"no progress from ({st.a},{st.b}) to ({u},{v})",
                             trace=st)
        return ch

    # -- case 1 -----------------------------------------------------------

    def _case1(self, a, b, F, x, y, inside, depth) -> RouteStep:
        X, Y = F[b]
        d = self.scale
        region_b = [c for c in inside
                    if F[c][1] <= F[c][0] and Y - F[c][1] <= X - F[c][0]]
        if region_b:
            c = min(region_b, key=lambda c: (F[c][0] + (X - F[c][0]), c))
            # d_inf(a,c) + d_inf(c,b) = x_c + (x - x_c) = x for every c in B,
            # so the id breaks every tie
            st = RouteStep("case1-regionB", a, b, F.frame, x, y, [], 0.0,
                           details={"c": c})
            left = self._child(st, a, c, depth)
            right = self._child(st, c, b, depth)
            st.path = left.path + right.path[1:]
            st.length = left.length + right.length
            self.check(st, "route(a,c) + route(c,b) <= (1+sqrt2)x + y",
                       left.bound + right.bound, st.length)
            return st
        c, via = self._square_point(a, b, F, inside)
        cx, cy = F[c][0] / d, F[c][1] / d
        region = "A" if F[c][1] > F[c][0] else "C"
        st = RouteStep(f"case1-region{region}", a, b, F.frame, x, y, [], 0.0,
                       details={"c": c, "square": via})
        if via == "S_a":
            e = self.elen(a, c)
            self.check(st, "d2(a,c) <= x_c + y_c", cx + cy, e)
            ch = self._child(st, c, b, depth)
            st.path = [a] + ch.path
            st.length = e + ch.length
            if region == "A":
                est = cx + cy + COEFF * (x - cx) + (y - cy)
            else:
                est = cx + cy + COEFF * (y - cy) + (x - cx)
        else:
            e = self.elen(c, b)
            self.check(st, "d2(c,b) <= (x-x_c) + (y-y_c)",
                       (x - cx) + (y - cy), e)
            ch = self._child(st, a, c, depth)
            st.path = ch.path + [b]
            st.length = ch.length + e
            if region == "C":
                est = COEFF * cx + cy + (x - cx) + (y - cy)
            else:
                est = COEFF * cy + cx + (x - cx) + (y - cy)
        self.check(st, "edge + induction <= estimate", est, st.length)
        self.check(st, "estimate <= (1+sqrt2)x + y", st.bound, est)
        return st

    def _square_point(self, a, b, F, inside) -> tuple[int, str]:
        """Boundary point of S_a (else S_b) lying inside R(a, b)."""
        X, Y = F[b]
        inside = set(inside)
        best, side = None, []
        for pid in self.G.ids:
            px, py = F[pid]
            if px > 0 and py > 0:
                s = max(px, py)
                if best is None or s < best:
                    best, side = s, [pid]
                elif s == best:
                    side.append(pid)
        hits = sorted(p for p in side if p in inside)
        if hits:
            return hits[0], "S_a"
        best, side = None, []
        for pid in self.G.ids:
            px, py = F[pid]
            if px < X and py < Y:
                s = max(X - px, Y - py)
                if best is None or s < best:
                    best, side = s, [pid]
                elif s == best:
                    side.append(pid)
        hits = sorted(p for p in side if p in inside)
        if hits:
            return hits[0], "S_b"
        raise RouteError(f"no boundary point of S_a or S_b inside R({a},{b})")

    # -- case 2 -----------------------------------------------------------

    def _case2(self, a, b, F, x, y, depth) -> RouteStep:
        seq = crossing_sequence(self.T, a, b, _frame=F)
        u = seq.unit
        k = seq.k
        bad = structural_violations(seq)
        if bad:
            raise RouteError(f"structure lemma fails for ({a},{b}): {bad}")
        # constructive paths from a to h_i and to l_i
        ph, pl = [[a]], [[a]]
        Lh, Ll = [0.0], [0.0]
        for i in range(1, k + 1):
            for lab, P, L in ((seq.h, ph, Lh), (seq.l, pl, Ll)):
                if lab[i] != lab[i - 1]:
                    P.append(P[-1] + [lab[i]])
                    L.append(L[-1] + self.elen(lab[i - 1], lab[i]))
                else:
                    P.append(P[-1])
                    L.append(L[-1])
        j = seq.first_inductive()
        last = k if j is None else j
        st = RouteStep("case2-no-inductive", a, b, F.frame, x, y, [], 0.0,
                       details={"k": k})
        for i in range(1, last + 1):
            self.check(st, f"potential S_{i}", 4 * u(seq.xs[i]),
                       Lh[i] + Ll[i] + u(seq.d_S(i, seq.h[i], seq.l[i])))

        def promising(i, c):
            """Path to promising ``c`` in S_i of length <= 2 x_c."""
            mine, other = (ph, pl) if c == seq.h[i] else (pl, ph)
            Lm, Lo = (Lh, Ll) if c == seq.h[i] else (Ll, Lh)
            alt = Lo[i] + self.elen(seq.h[i], seq.l[i])
            path, L = (mine[i], Lm[i]) if Lm[i] <= alt else \
                (other[i] + [c], alt)
            self.check(st, f"promising {c} in S_{i}: d <= 2x_c",
                       2 * u(seq.coords[c][0]), L)
            return list(path), L

        if j is None:
            if not seq.promising(k, b):
                raise RouteError("b is not on the E side of S_k", trace=st)
            st.path, st.length = promising(k, b)
            self.check(st, "2x <= (1+sqrt2)x + y", st.bound, 2 * x)
            return st

        c = seq.inductive_point(j)
        high = c == seq.h[j]
        st.case = "case2-inductive-high" if high else "case2-inductive-low"
        st.details.update({"j": j, "inductive_point": c})
        cxy = seq.coords[c]
        cx, cy = u(cxy[0]), u(cxy[1])
        if high:
            chain, i0 = maximal_low_path(seq, j)
            other = seq.l[j]
        else:
            chain, i0 = maximal_high_path(seq, j)
            other = seq.h[j]
        st.details["maximal_path"] = [chain[0], chain[-1], i0]
        if i0 == 0:
            base, Lb = [a], 0.0
        else:
            base, Lb = promising(i0, chain[0])
        Lc = self.plen(chain)
        s0 = seq.coords[chain[0]]
        s1 = seq.coords[chain[-1]]
        self.check(st, "maximal path <= dx + |dy|",
                   u(s1[0] - s0[0]) + u(abs(s1[1] - s0[1])), Lc)
        e = self.elen(other, c)
        ox = u(seq.coords[other][0])
        self.check(st, "gentle edge <= sqrt2 dx", SQRT2 * (cx - ox), e)
        lemma_path = base + chain[1:] + [c]
        L = Lb + Lc + e
        if high:
            self.check(st, "d(a,h_j) + (y_h - y) <= (1+sqrt2)x_h",
                       COEFF * cx, L + (cy - y))
        else:
            self.check(st, "d(a,l_j) - y_l <= (1+sqrt2)x_l",
                       COEFF * cx, L - cy)
        if c == b:
            st.path, st.length = lemma_path, L
            return st
        side = "high" if high else "low"
        m, ext, _ = monotone_extension(seq, j, side)
        Le = self.plen(ext)
        end = ext[-1]
        exy = seq.coords[end]
        ex, ey = u(exy[0]), u(exy[1])
        st.details["extension"] = [c, end, m]
        if len(ext) > 1:
            self.check(st, "monotone extension <= dx + |dy|",
                       (ex - cx) + abs(cy - ey), Le)
        path = lemma_path + ext[1:]
        L += Le
        if end == b:
            st.path, st.length = path, L
            est_child = 0.0
        elif not _good(seq, end):
            # stalled low chain: b is the third vertex of T_k
            if end != seq.l[k] or m != k:
                raise RouteError(f"extension from {c} stalled at {end}",
                                 trace=st)
            e2 = self.elen(end, b)
            self.check(st, "closing edge d2(l_k,b) <= dx + dy",
                       (x - ex) + (y - ey), e2)
            st.details["closing_edge"] = [end, b]
            st.path, st.length = path + [b], L + e2
            est_child = (x - ex) + (y - ey)
            lemma = COEFF * cx + cy
            self.check(st, "lemma + extension + closing edge",
                       lemma + ((ex - cx) + abs(cy - ey) if len(ext) > 1
                                else 0.0) + est_child, st.length)
            self.check(st, "closing total <= (1+sqrt2)x + y", st.bound,
                       lemma + (ex - cx) + (ey - cy) + est_child)
            return st
        else:
            self.check(st, "good position: x - x_c >= |y - y_c|",
                       x - ex, abs(y - ey))
            ch = self._child(st, end, b, depth)
            st.path = path + ch.path[1:]
            st.length = L + ch.length
            est_child = ch.bound
        lemma = (COEFF * cx - (cy - y)) if high else (COEFF * cx + cy)
        self.check(st, "lemma + extension + induction",
                   lemma + ((ex - cx) + abs(cy - ey) if len(ext) > 1 else 0.0)
                   + est_child, st.length)
        if high:
            est = (COEFF * cx - (cy - y) + (ex - cx) + (cy - ey)
                   + COEFF * (x - ex) + (ey - y))
            self.check(st, "high total <= (1+sqrt2)x", COEFF * x, est)
        else:
            est = (COEFF * cx + cy + (ex - cx) + (ey - cy)
                   + COEFF * (x - ex) + (y - ey))
            self.check(st, "low total <= (1+sqrt2)x + y", st.bound, est)
        return st


def route(T: Triangulation, a: int, b: int) -> RouteCertificate:
    """Path from ``a`` to ``b`` certified against ``(1+sqrt2)x + y``."""
    if a not in T.adjacency or b not in T.adjacency:
        raise KeyError(f"unknown point id in ({a},{b})")
    if a == b:
        raise ValueError("a and b coincide")
    R = _Router(T)
    root = R.route(a, b)
    shrink = _shrink(T)
    vs = tuple(root.path)
    length = sum(T.length(u, v) for u, v in zip(vs, vs[1:]))
    cert = RouteCertificate(a, b, T.metric, root.frame, root.x / shrink,
                            root.y / shrink, vs, length, root, shrink,
                            R.extent)
    return cert
