"""Exact planar primitives: points, metrics, axis-parallel squares and the
empty-square predicate.

Coordinates are :class:`fractions.Fraction`. Predicates never round; only
reported lengths are floats.
"""
from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

Coord = Fraction


def as_coord(value) -> Fraction:
    """Convert ``value`` to an exact coordinate.

    Floats are converted exactly (their binary value), strings are parsed
    by :class:`Fraction` (so ``"0.1"`` is exactly one tenth).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("boolean is not a coordinate")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite coordinate {value!r}")
        return Fraction(float(value))
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a coordinate")


@dataclass(frozen=True)
class Point:
    id: int
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_coord(self.x))
        object.__setattr__(self, "y", as_coord(self.y))

    @property
    def xy(self) -> tuple[Fraction, Fraction]:
        return (self.x, self.y)


class Side(str, enum.Enum):
    N = "N"
    E = "E"
    S = "S"
    W = "W"


# clockwise position of each side, starting from north
CLOCKWISE = {Side.N: 0, Side.E: 1, Side.S: 2, Side.W: 3}


class Metric(str, enum.Enum):
    L1 = "L1"
    L2 = "L2"
    LINF = "Linf"

    @classmethod
    def parse(cls, kind) -> "Metric":
        if isinstance(kind, cls):
            return kind
        key = str(kind).strip().lower()
        for m in cls:
            if m.value.lower() == key:
                return m
        if key in ("inf", "l_inf", "linfinity", "chebyshev"):
            return cls.LINF
        raise ValueError(f"unknown metric {kind!r}")


def metric(u: Point, v: Point, kind="Linf"):
    """Distance between ``u`` and ``v``.

    L1 and Linf are returned exactly (as Fractions); L2 is a float computed
    from the exact squared distance.
    """
    kind = Metric.parse(kind)
    dx = abs(u.x - v.x)
    dy = abs(u.y - v.y)
    if kind is Metric.L1:
        return dx + dy
    if kind is Metric.LINF:
        return max(dx, dy)
    return _sqrt_fraction(dx * dx + dy * dy)


def _sqrt_fraction(q: Fraction) -> float:
    # float(q) is correctly rounded, unlike float(num)/float(den) for big ints
    return math.sqrt(float(q))


def euclid(u: Point, v: Point) -> float:
    return metric(u, v, Metric.L2)


@dataclass(frozen=True)
class AxisSquare:
    """Axis-parallel square ``[west, west+side] x [south, south+side]``."""

    west: Fraction
    south: Fraction
    side: Fraction

    def __post_init__(self):
        for name in ("west", "south", "side"):
            object.__setattr__(self, name, as_coord(getattr(self, name)))
        if self.side <= 0:
            raise ValueError(f"square side must be positive, got {self.side}")

    @property
    def east(self) -> Fraction:
        return self.west + self.side

    @property
    def north(self) -> Fraction:
        return self.south + self.side

    def contains_open(self, p) -> bool:
        x, y = _xy(p)
        return self.west < x < self.east and self.south < y < self.north

    def contains_closed(self, p) -> bool:
        x, y = _xy(p)
        return self.west <= x <= self.east and self.south <= y <= self.north

    def sides_of(self, p) -> frozenset[Side]:
        """Closed sides of the square containing ``p``; empty off the boundary."""
        return point_side_on(self, p)

    def on_boundary(self, p) -> bool:
        return bool(point_side_on(self, p))

    def corners(self):
        return ((self.west, self.south), (self.east, self.south),
                (self.east, self.north), (self.west, self.north))


def _xy(p):
    if isinstance(p, Point):
        return p.x, p.y
    return p[0], p[1]


def point_side_on(square: AxisSquare, p) -> frozenset[Side]:
    x, y = _xy(p)
    if not square.contains_closed((x, y)):
        return frozenset()
    out = set()
    if y == square.north:
        out.add(Side.N)
    if x == square.east:
        out.add(Side.E)
    if y == square.south:
        out.add(Side.S)
    if x == square.west:
        out.add(Side.W)
    return frozenset(out)


def clockwise_boundary_distance(square: AxisSquare, p, q) -> float:
    """Length of the clockwise walk along the boundary of ``square`` from
    ``p`` to ``q``."""
    return float(_clockwise_exact(square, p, q))


def _clockwise_exact(square: AxisSquare, p, q) -> Fraction:
    tp = _boundary_param(square, p)
    tq = _boundary_param(square, q)
    return (tq - tp) % (4 * square.side)


def _boundary_param(square: AxisSquare, p) -> Fraction:
    # arclength measured clockwise from the NW corner
    x, y = _xy(p)
    sides = point_side_on(square, (x, y))
    s = square.side
    if not sides:
        raise ValueError(f"point {(x, y)} is not on the square boundary")
    if Side.N in sides:
        return x - square.west
    if Side.E in sides:
        return s + (square.north - y)
    if Side.S in sides:
        return 2 * s + (square.east - x)
    return 3 * s + (y - square.south)


class Slope(str, enum.Enum):
    GENTLE = "gentle"
    STEEP = "steep"


def classify_slope(u, v) -> Slope:
    """Gentle iff the slope of ``uv`` lies in the closed interval [-1, 1]."""
    ux, uy = _xy(u)
    vx, vy = _xy(v)
    if (ux, uy) == (vx, vy):
        raise ValueError("slope of a degenerate segment")
    return Slope.GENTLE if abs(vy - uy) <= abs(vx - ux) else Slope.STEEP


def orientation(p, q, r) -> int:
    """Sign of the cross product (q - p) x (r - p): +1 left turn, -1 right."""
    px, py = _xy(p)
    qx, qy = _xy(q)
    rx, ry = _xy(r)
    d = (qx - px) * (ry - py) - (qy - py) * (rx - px)
    return (d > 0) - (d < 0)


# ----------------------------------------------------------------------------
# point sets


@dataclass(frozen=True)
class Violation:
    rule: str
    ids: tuple[int, ...]

    def __str__(self):
        return f"{self.rule}({','.join(map(str, self.ids))})"


class GeneralPositionError(ValueError):
    """Raised when a point set fails the general-position rules."""

    def __init__(self, violations: Sequence[Violation]):
        self.violations = list(violations)
        shown = ", ".join(str(v) for v in self.violations[:10])
        more = len(self.violations) - 10
        if more > 0:
            shown += f", ... ({more} more)"
        super().__init__(f"point set is not in general position: {shown}")


class PointSet:
    """Ordered, immutable collection of points with unique ids."""

    def __init__(self, points: Iterable[Point]):
        self._points = tuple(points)
        self._by_id = {p.id: p for p in self._points}
        if len(self._by_id) != len(self._points):
            raise ValueError("point ids must be unique")

    @classmethod
    def from_coords(cls, coords, ids=None) -> "PointSet":
        coords = list(coords)
        if ids is None:
            ids = range(len(coords))
        return cls(Point(int(i), as_coord(c[0]), as_coord(c[1]))
                   for i, c in zip(ids, coords, strict=True))

    @property
    def points(self) -> tuple[Point, ...]:
        return self._points

    @property
    def ids(self) -> list[int]:
        return [p.id for p in self._points]

    def __len__(self):
        return len(self._points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self._points)

    def __getitem__(self, pid: int) -> Point:
        return self._by_id[pid]

    def __contains__(self, pid) -> bool:
        return pid in self._by_id

    def __eq__(self, other):
        return isinstance(other, PointSet) and self._points == other._points

    def __hash__(self):
        return hash(self._points)

    def __repr__(self):
        return f"PointSet(n={len(self)})"

    def mapped(self, fn) -> "PointSet":
        """Apply ``fn(x, y) -> (x', y')`` to every point, keeping ids."""
        return PointSet(Point(p.id, *fn(p.x, p.y)) for p in self._points)

    # -- integer view -------------------------------------------------------
    # All predicates run on integers: coordinates scaled by the lcm of the
    # denominators. Python ints are exact and much faster than Fractions.

    @cached_property
    def scale(self) -> int:
        d = 1
        for p in self._points:
            d = math.lcm(d, p.x.denominator, p.y.denominator)
        return d

    @cached_property
    def int_coords(self) -> dict[int, tuple[int, int]]:
        d = self.scale
        return {p.id: (p.x.numerator * (d // p.x.denominator),
                       p.y.numerator * (d // p.y.denominator))
                for p in self._points}

    @cached_property
    def index(self) -> "RangeIndex":
        return RangeIndex(self.int_coords)

    @cached_property
    def tindex(self) -> "RangeIndex":
        """Index over transposed coordinates (sorted by ordinate)."""
        return RangeIndex({k: (y, x) for k, (x, y) in self.int_coords.items()})

    def float_coords(self) -> np.ndarray:
        return np.array([[float(p.x), float(p.y)] for p in self._points],
                        dtype=float).reshape(-1, 2)

    @cached_property
    def extent(self) -> float:
        """Side of the bounding square; used to normalise tolerances."""
        if len(self) < 2:
            return 1.0
        xs = [p.x for p in self._points]
        ys = [p.y for p in self._points]
        e = float(max(max(xs) - min(xs), max(ys) - min(ys)))
        return e if e > 0 else 1.0


class RangeIndex:
    """Points sorted by abscissa, for open axis-box queries on integer coords."""

    def __init__(self, int_coords: dict[int, tuple[int, int]]):
        items = sorted(int_coords.items(), key=lambda kv: kv[1][0])
        self.ids = [k for k, _ in items]
        self.xs = [v[0] for _, v in items]
        self.ys = [v[1] for _, v in items]
        big = max((max(abs(v[0]), abs(v[1])) for v in int_coords.values()),
                  default=0)
        dtype = np.int64 if big < 2 ** 60 else object
        self._ys_arr = np.array(self.ys, dtype=dtype)
        self._ids_arr = np.array(self.ids, dtype=np.int64)

    def x_slice(self, x0: int, x1: int) -> tuple[int, int]:
        """Index range of points with ``x0 < x < x1``."""
        return bisect.bisect_right(self.xs, x0), bisect.bisect_left(self.xs, x1)

    def ys_between(self, x0: int, x1: int) -> list[int]:
        i, j = self.x_slice(x0, x1)
        return self.ys[i:j]

    def open_box_ids(self, x0, x1, y0, y1) -> list[int]:
        i, j = self.x_slice(x0, x1)
        if i >= j:
            return []
        ys = self._ys_arr[i:j]
        mask = (ys > y0) & (ys < y1)
        return self._ids_arr[i:j][mask].tolist()

    def open_box_empty(self, x0, x1, y0, y1) -> bool:
        i, j = self.x_slice(x0, x1)
        if i >= j:
            return True
        ys = self._ys_arr[i:j]
        return not bool(np.any((ys > y0) & (ys < y1)))


# ----------------------------------------------------------------------------
# general position


def validate_general_position(P: PointSet) -> list[Violation]:
    """Violations of the general-position rules; empty iff ``P`` is valid.

    Rules: distinct abscissae, distinct ordinates, and no four points on
    the boundary of one axis-parallel square.
    """
    out: list[Violation] = []
    for rule, key in (("shared-abscissa", 0), ("shared-ordinate", 1)):
        seen: dict[Fraction, int] = {}
        for p in P:
            c = p.xy[key]
            if c in seen:
                out.append(Violation(rule, (seen[c], p.id)))
            else:
                seen[c] = p.id
    if out:
        # the co-square scan below assumes distinct coordinates
        return out
    out.extend(_cosquare_violations(P))
    return out


def _cosquare_violations(P: PointSet) -> list[Violation]:
    # With distinct coordinates each side line holds at most one point, so a
    # co-square quadruple has exactly one point in the interior of each
    # side: W/E are the x-extremes, S/N the y-extremes, and the x-extent
    # equals the y-extent. Match (W, E) pairs to (S, N) pairs by extent.
    ic = P.int_coords
    by_x = sorted(ic.items(), key=lambda kv: kv[1][0])
    by_y = sorted(ic.items(), key=lambda kv: kv[1][1])
    vertical: dict[int, list[tuple[int, int]]] = {}
    n = len(by_y)
    for i in range(n):
        si, (_, sy) = by_y[i]
        for j in range(i + 1, n):
            ni, (_, ny) = by_y[j]
            vertical.setdefault(ny - sy, []).append((si, ni))
    out = []
    for i in range(n):
        wi, (wx, wy) = by_x[i]
        for j in range(i + 1, n):
            ei, (ex, ey) = by_x[j]
            cands = vertical.get(ex - wx)
            if not cands:
                continue
            for si, ni in cands:
                if si in (wi, ei) or ni in (wi, ei):
                    continue
                sx, sy = ic[si]
                nx, ny = ic[ni]
                if (wx < sx < ex and wx < nx < ex
                        and sy < min(wy, ey) and ny > max(wy, ey)):
                    out.append(Violation("co-square",
                                         tuple(sorted((wi, ei, si, ni)))))
    return out


def require_general_position(P: PointSet) -> None:
    bad = validate_general_position(P)
    if bad:
        raise GeneralPositionError(bad)


# ----------------------------------------------------------------------------
# squares through two points


@dataclass(frozen=True)
class SquareFamily:
    """All axis-parallel squares having ``u`` and ``v`` on their boundary.

    Side lengths range over ``[min_side, inf)``. For a given side,
    :meth:`placements` lists the admissible ``(west, south)`` positions as
    closed boxes ``((w0, w1), (s0, s1))``; degenerate intervals pin a
    coordinate.
    """

    u: Point
    v: Point

    @property
    def min_side(self) -> Fraction:
        return max(abs(self.u.x - self.v.x), abs(self.u.y - self.v.y))

    def placements(self, side) -> list[tuple[tuple[Fraction, Fraction],
                                             tuple[Fraction, Fraction]]]:
        s = as_coord(side)
        if s < self.min_side:
            return []
        u, v = self.u, self.v
        # containment of both points
        wx = (max(u.x, v.x) - s, min(u.x, v.x))
        wy = (max(u.y, v.y) - s, min(u.y, v.y))
        out = []
        for cu in _pin_options(u, s):
            for cv in _pin_options(v, s):
                box = [list(wx), list(wy)]
                ok = True
                for axis, val in (cu, cv):
                    lo, hi = box[axis]
                    lo, hi = max(lo, val), min(hi, val)
                    if lo > hi:
                        ok = False
                        break
                    box[axis] = [lo, hi]
                if ok:
                    b = ((box[0][0], box[0][1]), (box[1][0], box[1][1]))
                    if b not in out:
                        out.append(b)
        return out

    def minimal_squares(self) -> tuple[str | None, tuple[Fraction, Fraction]]:
        """Free axis and placement interval of the minimal squares.

        Returns ``("south", (lo, hi))`` when the x-extent dominates,
        ``("west", (lo, hi))`` when the y-extent dominates, and
        ``(None, (west, south))`` when the bounding box is itself a square.
        """
        u, v = self.u, self.v
        w, h = abs(u.x - v.x), abs(u.y - v.y)
        L = max(w, h)
        if w > h:
            return "south", (max(u.y, v.y) - L, min(u.y, v.y))
        if h > w:
            return "west", (max(u.x, v.x) - L, min(u.x, v.x))
        return None, (min(u.x, v.x), min(u.y, v.y))


def _pin_options(p: Point, s: Fraction):
    # p on W, E, S, N side respectively -> (axis, value of west/south)
    return ((0, p.x), (0, p.x - s), (1, p.y), (1, p.y - s))


def square_family_through(u: Point, v: Point) -> SquareFamily:
    if u.xy == v.xy:
        raise ValueError("square family through coincident points")
    return SquareFamily(u, v)


def empty_square_exists(u: Point, v: Point, P: PointSet
                        ) -> tuple[bool, AxisSquare | None]:
    """Whether some axis-parallel square has ``u`` and ``v`` on its boundary
    and no point of ``P`` in its open interior; returns a witness if so.
    """
    if u.id == v.id or u.xy == v.xy:
        raise ValueError("empty_square_exists needs two distinct points")
    if u.id not in P or v.id not in P:
        raise ValueError("both points must belong to the point set")
    d = P.scale
    ic = P.int_coords
    res = _empty_square_int(ic[u.id], ic[v.id], P.index, P.tindex)
    if res is None:
        return False, None
    w, s, side = res
    return True, AxisSquare(Fraction(w, d), Fraction(s, d), Fraction(side, d))


def _empty_square_int(pu, pv, index: RangeIndex, tindex: RangeIndex):
    """Integer core of :func:`empty_square_exists`; returns
    ``(west, south, side)`` of a witness or None.

    A square with empty interior that contains u and v has them on its
    boundary (they are points of P), and it contains a square of the
    minimal side ``L = max(dx, dy)`` that still holds both. So only the
    one-parameter family of minimal squares needs checking. ``index`` is
    sorted by x, ``tindex`` is the same index on transposed coordinates.
    """
    (ux, uy), (vx, vy) = pu, pv
    if abs(ux - vx) >= abs(uy - vy):
        ys = index.ys_between(min(ux, vx), max(ux, vx))
        t = _minimal_slide(ux, uy, vx, vy, ys)
        return None if t is None else (min(ux, vx), t, abs(ux - vx))
    xs = tindex.ys_between(min(uy, vy), max(uy, vy))
    t = _minimal_slide(uy, ux, vy, vx, xs)
    return None if t is None else (t, min(uy, vy), abs(uy - vy))


def _minimal_slide(ux, uy, vx, vy, strip) -> int | None:
    # x-dominant pair; strip holds the ordinates of the points strictly
    # between u and v in x. Returns the lowest free south coordinate.
    miny, maxy = min(uy, vy), max(uy, vy)
    below = above = None
    for y in strip:
        if y < miny:
            if below is None or y > below:
                below = y
        elif y > maxy:
            if above is None or y < above:
                above = y
        else:
            return None
    return slide_window(ux, uy, vx, vy, below, above)


def slide_window(ux, uy, vx, vy, below, above) -> int | None:
    """Lowest south side of a free minimal square for an x-dominant pair.

    The minimal squares have side ``L = |vx - ux|`` and south side ``t`` in
    ``[max(uy, vy) - L, min(uy, vy)]``. With the open bounding box empty,
    only the highest strip point under the box (``below``) and the lowest
    one over it (``above``) can block: ``t`` is free iff
    ``below <= t`` and ``t + L <= above``.
    """
    L = abs(vx - ux)
    lo, hi = max(uy, vy) - L, min(uy, vy)
    if below is not None and below > lo:
        lo = below
    if above is not None and above - L < hi:
        hi = above - L
    return lo if lo <= hi else None
