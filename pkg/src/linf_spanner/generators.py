"""Worst-case ladder family and seeded random point sets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import Point, PointSet, validate_general_position

SQRT2 = math.sqrt(2.0)
B_NUDGE_DEN = 2 ** 32
DEFAULT_PRECISION = 10 ** 9


def sqrt2_convergent(max_den: int = DEFAULT_PRECISION) -> Fraction:
    """Last continued-fraction convergent of sqrt(2) with denominator
    at most ``max_den``."""
    if max_den < 1:
        raise ValueError("max_den must be positive")
    # sqrt(2) = [1; 2, 2, 2, ...]
    p0, q0, p1, q1 = 1, 0, 1, 1
    while True:
        p2, q2 = 2 * p1 + p0, 2 * q1 + q0
        if q2 > max_den:
            return Fraction(p1, q1)
        p0, q0, p1, q1 = p1, q1, p2, q2


@dataclass(frozen=True)
class ChewFamilyParams:
    m: int
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 4:
            raise ValueError(f"m must be an integer >= 4, got {self.m}")
        if self.precision < 1:
            raise ValueError("precision must be positive")

    @property
    def k(self) -> int:
        return self.m - 3

    @property
    def delta(self) -> float:
        return SQRT2 / self.m


@dataclass
class ChewFamily:
    """Generated ladder instance and the structure it is expected to have.

    Ids ``0..k+1`` are ``p_0 = a, ..., p_{k+1} = c1`` and ids
    ``k+2..2k+3`` are ``q_0 = c2, ..., q_{k+1} = b``.
    """

    params: ChewFamilyParams
    points: PointSet
    delta: Fraction
    sqrt2: Fraction
    p_ids: list[int]
    q_ids: list[int]
    expected_triangles: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def a(self) -> int:
        return self.p_ids[0]

    @property
    def b(self) -> int:
        return self.q_ids[-1]

    @property
    def c1(self) -> int:
        return self.p_ids[-1]

    @property
    def c2(self) -> int:
        return self.q_ids[0]

    @property
    def q_chain(self) -> list[tuple[int, int]]:
        return list(zip(self.q_ids, self.q_ids[1:]))

    @property
    def closed_form_stretch(self) -> float:
        return chew_stretch_closed_form(float(self.delta))

    @property
    def path_stretch(self) -> float:
        return chew_path_stretch(float(self.delta))


def generate_chew_family(params: ChewFamilyParams | int,
                         precision: int | None = None) -> ChewFamily:
    """Ladder instance whose stretch tends to sqrt(4 + 2 sqrt 2).

    ``a`` is the origin, ``b = (1, r - 1)``, ``c1 = (d, r - 2d)`` and
    ``c2 = (1 - d, -(1 - 2d))`` (b is shifted right by ``d / 2**32``) with ``r`` a rational approximation of
    sqrt(2) and ``d = r / m``. Each segment ``[a c1]`` and ``[c2 b]``
    carries ``k = m - 3`` interior points spaced ``d`` apart vertically.
    """
    if not isinstance(params, ChewFamilyParams):
        params = ChewFamilyParams(int(params), precision or DEFAULT_PRECISION)
    m, k = params.m, params.k
    r = sqrt2_convergent(params.precision)
    d = r / m
    rise = r - 2 * d            # vertical extent of both segments
    pts = []
    # a, b, q_j and p_{j+2} would share a side-1 square (x-extent of a-b is
    # exactly 1, as is y(p_{j+2}) - y(q_j)); nudging b right breaks it
    b_nudge = d / B_NUDGE_DEN
    for i in range(k + 2):
        y = i * d
        pts.append(Point(i, d * y / rise, y))
    base = k + 2
    for j in range(k + 2):
        dy = j * d
        x = 1 - d + d * dy / rise
        if j == k + 1:
            x += b_nudge
        pts.append(Point(base + j, x, -(1 - 2 * d) + dy))
    p_ids = list(range(k + 2))
    q_ids = list(range(base, base + k + 2))
    tris = []
    for i in range(k + 1):
        tris.append((p_ids[i], p_ids[i + 1], q_ids[i]))
        tris.append((q_ids[i], q_ids[i + 1], p_ids[i + 1]))
    return ChewFamily(params, PointSet(pts), d, r, p_ids, q_ids, tris)


def chew_stretch_closed_form(delta: float) -> float:
    """Reference closed form for the a-b stretch of the ladder family.

    Its first term, ``|(sqrt2 - delta, delta)|``, overstates ``|a c1|``:
    with ``c1 = (delta, sqrt2 - 2 delta)`` the true rise is ``sqrt2 - 2
    delta``. See :func:`chew_path_stretch` for the value the generated
    instances actually attain. Both tend to ``sqrt(4 + 2 sqrt2)``.
    """
    _check_delta(delta)
    path = (math.hypot(SQRT2 - delta, delta)
            + math.hypot(1 - delta, 1 - 2 * delta))
    return path / math.sqrt(4 - 2 * SQRT2)


def chew_path_stretch(delta: float) -> float:
    """``(|a c1| + |c1 b|) / |a b|`` for the ladder's own coordinates."""
    _check_delta(delta)
    path = (math.hypot(SQRT2 - 2 * delta, delta)
            + math.hypot(1 - delta, 1 - 2 * delta))
    return path / math.sqrt(4 - 2 * SQRT2)


def _check_delta(delta):
    if not 0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")


LOWER_BOUND_LIMIT = math.sqrt(4 + 2 * SQRT2)


# ----------------------------------------------------------------------------
# random sets

GRID_BITS = 40
DISTRIBUTIONS = ("uniform-box", "clustered", "near-cosquare")


def random_pointset(n: int, seed: int, distribution: str = "uniform-box",
                    grid_bits: int = GRID_BITS) -> PointSet:
    """Seeded random point set in exact general position.

    Coordinates are multiples of ``2**-grid_bits`` in the unit box.
    Offending points are re-drawn until no general-position rule fails.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if distribution not in DISTRIBUTIONS:
        raise ValueError(f"unknown distribution {distribution!r}")
    rng = np.random.default_rng(seed)
    N = 1 << grid_bits
    if distribution == "uniform-box":
        raw = [_uniform(rng, N) for _ in range(n)]
    elif distribution == "clustered":
        raw = _clustered(rng, n, N)
    else:
        raw = _near_cosquare(rng, n, N)
    raw = [(int(x) % N, int(y) % N) for x, y in raw]
    for _ in range(1000):
        P = _to_pointset(raw, N)
        bad = validate_general_position(P)
        if not bad:
            return P
        for v in bad:
            i = v.ids[-1]
            raw[i] = _jitter(rng, raw[i], N)
    raise RuntimeError("could not reach general position")  # pragma: no cover


def _uniform(rng, N):
    return int(rng.integers(0, N)), int(rng.integers(0, N))


def _jitter(rng, p, N):
    dx, dy = (int(v) for v in rng.integers(-(1 << 8), 1 << 8, size=2))
    return (p[0] + dx) % N, (p[1] + dy) % N


def _clustered(rng, n, N):
    centers = [_uniform(rng, N) for _ in range(max(1, n // 8))]
    spread = N / 40
    out = []
    for _ in range(n):
        cx, cy = centers[int(rng.integers(len(centers)))]
        dx, dy = rng.normal(0.0, spread, size=2)
        out.append((cx + int(dx), cy + int(dy)))
    return out


def _near_cosquare(rng, n, N):
    # groups of four points on one square boundary, one of them nudged
    # off by a single grid unit
    out = []
    while len(out) < n:
        s = int(rng.integers(N // 16, N // 4))
        X = int(rng.integers(0, N - s))
        Y = int(rng.integers(0, N - s))
        t = rng.integers(1, s, size=4)
        quad = [(X, Y + int(t[0])), (X + s, Y + int(t[1])),
                (X + int(t[2]), Y), (X + int(t[3]), Y + s)]
        k = int(rng.integers(4))
        x, y = quad[k]
        quad[k] = (x + int(rng.choice([-1, 1])), y) if k < 2 else \
            (x, y + int(rng.choice([-1, 1])))
        out.extend(quad)
    return out[:n]


def _to_pointset(raw, N) -> PointSet:
    return PointSet(Point(i, Fraction(x, N), Fraction(y, N))
                    for i, (x, y) in enumerate(raw))
