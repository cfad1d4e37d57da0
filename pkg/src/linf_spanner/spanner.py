"""Graph distances, stretch factors and the (1+sqrt2)x + y bound."""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .delaunay import Triangulation
from .geometry import euclid

SQRT2 = math.sqrt(2.0)
THEOREM_COEFF = 1.0 + SQRT2
STRETCH_UPPER = math.sqrt(4.0 + 2.0 * SQRT2)
TOL = 1e-9


@dataclass(frozen=True)
class PathInGraph:
    vertices: tuple[int, ...]
    length: float

    def validate(self, T: Triangulation, rel: float = 1e-12) -> list[str]:
        """Problems with this path as a walk in ``T`` (empty if none)."""
        errs = []
        total = 0.0
        for u, v in zip(self.vertices, self.vertices[1:]):
            if not T.has_edge(u, v):
                errs.append(f"({u},{v}) is not an edge")
                continue
            total += T.length(u, v)
        if abs(total - self.length) > rel * max(1.0, abs(total)):
            errs.append(f"length {self.length!r} != recomputed {total!r}")
        return errs

    @classmethod
    def along(cls, T: Triangulation, vertices) -> "PathInGraph":
        vs = tuple(vertices)
        return cls(vs, sum(T.length(u, v) for u, v in zip(vs, vs[1:])))


@dataclass(frozen=True)
class ShortestPaths:
    source: int
    dist: dict[int, float]
    pred: dict[int, int | None]

    def path_to(self, target: int) -> PathInGraph:
        if target not in self.dist:
            raise KeyError(f"vertex {target} unreachable from {self.source}")
        out = [target]
        while out[-1] != self.source:
            out.append(self.pred[out[-1]])
        return PathInGraph(tuple(reversed(out)), self.dist[target])


def shortest_paths_from(T: Triangulation, source: int) -> ShortestPaths:
    """Dijkstra under Euclidean edge weights."""
    if source not in T.adjacency:
        raise KeyError(f"unknown source id {source}")
    dist = {source: 0.0}
    pred: dict[int, int | None] = {source: None}
    done = set()
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v in T.adjacency[u]:
            nd = d + T.length(u, v)
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return ShortestPaths(source, dist, pred)


def graph_distance(T: Triangulation, a: int, b: int) -> float:
    return shortest_paths_from(T, a).dist.get(b, math.inf)


def distance_matrix(T: Triangulation) -> tuple[list[int], np.ndarray]:
    """All-pairs d_T, rows and columns ordered by point id."""
    ids = sorted(T.points.ids)
    pos = {v: i for i, v in enumerate(ids)}
    n = len(ids)
    rows, cols, w = [], [], []
    for (u, v), ln in T.lengths.items():
        rows += [pos[u], pos[v]]
        cols += [pos[v], pos[u]]
        w += [ln, ln]
    G = csr_matrix((w, (rows, cols)), shape=(n, n))
    return ids, dijkstra(G, directed=False)


def _pair_geometry(T: Triangulation, ids):
    """Euclidean distances plus the (x, y) of the bound for every pair.

    For L1 the bound lives in the rotated frame, whose distances are
    sqrt2 times the original ones.
    """
    P, G = T.points, T.geometry
    xy = np.array([[float(P[i].x), float(P[i].y)] for i in ids])
    gxy = np.array([[float(G[i].x), float(G[i].y)] for i in ids])
    d2 = np.hypot(xy[:, None, 0] - xy[None, :, 0],
                  xy[:, None, 1] - xy[None, :, 1])
    dx = np.abs(gxy[:, None, 0] - gxy[None, :, 0])
    dy = np.abs(gxy[:, None, 1] - gxy[None, :, 1])
    shrink = 1.0 if G is P else SQRT2
    return d2, np.maximum(dx, dy) / shrink, np.minimum(dx, dy) / shrink


def theorem_bound(x: float, y: float) -> float:
    return THEOREM_COEFF * x + y


@dataclass
class StretchReport:
    """Per-pair distances for all unordered pairs ``i < j``.

    ``margin`` is ``(1+sqrt2)x + y - d_T`` in input units;
    ``min_margin`` is its minimum divided by the bounding-box extent.
    """

    metric: str
    ids: list[int]
    pair_u: np.ndarray
    pair_v: np.ndarray
    d_T: np.ndarray
    d2: np.ndarray
    ratio: np.ndarray
    margin: np.ndarray
    extent: float

    @property
    def max_ratio(self) -> float:
        return float(self.ratio.max()) if len(self.ratio) else 1.0

    @property
    def argmax(self) -> tuple[int, int] | None:
        if not len(self.ratio):
            return None
        k = int(np.argmax(self.ratio))
        return int(self.pair_u[k]), int(self.pair_v[k])

    @property
    def min_margin(self) -> float:
        if not len(self.margin):
            return math.inf
        return float(self.margin.min()) / self.extent

    @property
    def argmin_margin(self) -> tuple[int, int] | None:
        if not len(self.margin):
            return None
        k = int(np.argmin(self.margin))
        return int(self.pair_u[k]), int(self.pair_v[k])

    def bound_holds(self, tol: float = TOL) -> bool:
        return self.min_margin >= -tol

    def record(self, u: int, v: int) -> dict:
        if u > v:
            u, v = v, u
        hit = np.nonzero((self.pair_u == u) & (self.pair_v == v))[0]
        if not len(hit):
            raise KeyError((u, v))
        k = int(hit[0])
        return {"pair": [u, v], "d_T": float(self.d_T[k]),
                "d2": float(self.d2[k]), "ratio": float(self.ratio[k]),
                "margin": float(self.margin[k])}

    def __len__(self):
        return len(self.ratio)


def stretch_factor(T: Triangulation) -> StretchReport:
    if len(T.points) < 2:
        raise ValueError("need at least two points")
    ids, D = distance_matrix(T)
    if not np.all(np.isfinite(D)):
        raise ValueError("triangulation is disconnected")
    d2, x, y = _pair_geometry(T, ids)
    iu, ju = np.triu_indices(len(ids), k=1)
    dT = D[iu, ju]
    e = d2[iu, ju]
    idarr = np.asarray(ids)
    return StretchReport(
        metric=T.metric, ids=ids, pair_u=idarr[iu], pair_v=idarr[ju],
        d_T=dT, d2=e, ratio=dT / e,
        margin=theorem_bound(x[iu, ju], y[iu, ju]) - dT,
        extent=T.points.extent)


def verify_theorem_bound(T: Triangulation) -> StretchReport:
    """Same data as :func:`stretch_factor`; read ``margin``/``min_margin``."""
    return stretch_factor(T)


def pair_record(T: Triangulation, a: int, b: int) -> dict:
    """Single-pair report with the shortest path."""
    P, G = T.points, T.geometry
    path = shortest_paths_from(T, a).path_to(b)
    dx, dy = abs(G[a].x - G[b].x), abs(G[a].y - G[b].y)
    shrink = 1.0 if G is P else SQRT2
    x, y = float(max(dx, dy)) / shrink, float(min(dx, dy)) / shrink
    d2 = euclid(P[a], P[b])
    return {"pair": [a, b], "path": list(path.vertices), "d_T": path.length,
            "d2": d2, "ratio": path.length / d2, "x": x, "y": y,
            "bound": theorem_bound(x, y),
            "margin": theorem_bound(x, y) - path.length}


# ----------------------------------------------------------------------------
# the corollary


@dataclass(frozen=True)
class CorollaryResult:
    value: float
    theta: float
    x: float
    y: float

    @property
    def x_over_y(self) -> float:
        return self.x / self.y


def bound_ratio(x, y):
    """``((1+sqrt2)x + y) / sqrt(x^2 + y^2)``."""
    return (THEOREM_COEFF * x + y) / np.hypot(x, y)


def corollary_maximizer(grid: int = 4097) -> CorollaryResult:
    """Maximise the bound ratio over directions ``0 < y <= x``.

    With ``(x, y) = (cos t, sin t)``, ``t`` in ``(0, pi/4]``, a grid search
    brackets the maximum and the root of the derivative refines it.
    """
    ts = np.linspace(0.0, math.pi / 4, grid)[1:]
    vals = bound_ratio(np.cos(ts), np.sin(ts))
    k = int(np.argmax(vals))
    lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, len(ts) - 1)]

    def slope(t):
        return -THEOREM_COEFF * math.sin(t) + math.cos(t)

    if slope(lo) > 0 > slope(hi):
        t = optimize.brentq(slope, lo, hi, xtol=1e-15)
    else:
        t = float(ts[k])
    x, y = math.cos(t), math.sin(t)
    return CorollaryResult(float(bound_ratio(x, y)), t, x, y)
