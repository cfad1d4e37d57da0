"""scikit-learn style wrapper: fit on points, predict graph distances."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .delaunay import triangulate
from .geometry import PointSet, as_coord, require_general_position
from .router import route
from .spanner import distance_matrix, stretch_factor


def check_points(X, max_denominator: int | None = None) -> PointSet:
    """Validate an ``(n, 2)`` array-like and return an exact point set.

    Object arrays (Fractions, ints, decimal strings) keep their exact
    values; numeric arrays must be finite. With ``max_denominator`` each
    coordinate is replaced by its closest fraction with a bounded
    denominator.
    """
    arr = np.asarray(X, dtype=object if _is_exact(X) else None)
    if arr.dtype == object:
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d array, got {arr.ndim}-d")
    else:
        arr = check_array(X, dtype="numeric", ensure_min_samples=2)
    if arr.shape[1] != 2:
        raise ValueError(f"expected 2 columns, got {arr.shape[1]}")
    if arr.shape[0] < 2:
        raise ValueError("need at least two points")
    rows = []
    for x, y in arr:
        cx, cy = as_coord(_py(x)), as_coord(_py(y))
        if max_denominator is not None:
            cx = cx.limit_denominator(max_denominator)
            cy = cy.limit_denominator(max_denominator)
        rows.append((cx, cy))
    return PointSet.from_coords(rows)


def _is_exact(X) -> bool:
    try:
        return any(isinstance(v, (Fraction, str)) for row in X for v in row)
    except TypeError:
        return False


def _py(v):
    return v.item() if isinstance(v, np.generic) else v


class LinfDelaunaySpanner(BaseEstimator):
    """Delaunay triangulation under the L-infinity (or L1) metric, used as a
    spanner.

    Parameters
    ----------
    metric : {"linf", "l1"}
    max_denominator : int or None
        Rationalise inputs to this denominator bound; None keeps exact
        binary values of floats.

    Attributes
    ----------
    points_ : PointSet   ids are row numbers of ``X``
    triangulation_ : Triangulation
    n_features_in_ : int
    """

    def __init__(self, metric: str = "linf", max_denominator=None):
        self.metric = metric
        self.max_denominator = max_denominator

    def fit(self, X, y=None):
        if self.metric not in ("linf", "l1"):
            raise ValueError(f"metric must be 'linf' or 'l1', "
                             f"got {self.metric!r}")
        P = check_points(X, self.max_denominator)
        require_general_position(P)
        self.points_ = P
        self.triangulation_ = triangulate(P, self.metric, check=False)
        self.n_features_in_ = 2
        self._dist = None
        return self

    def _distances(self) -> np.ndarray:
        if self._dist is None:
            _, self._dist = distance_matrix(self.triangulation_)
        return self._dist

    def predict(self, pairs) -> np.ndarray:
        """Graph distance d_T for each row ``(i, j)`` of ``pairs``."""
        check_is_fitted(self, "triangulation_")
        idx = check_array(pairs, dtype=np.int64, ensure_min_samples=1)
        if idx.shape[1] != 2:
            raise ValueError("pairs must have two columns")
        n = len(self.points_)
        if idx.min() < 0 or idx.max() >= n:
            raise IndexError(f"pair index out of range for {n} points")
        D = self._distances()
        return D[idx[:, 0], idx[:, 1]]

    def edges(self) -> np.ndarray:
        check_is_fitted(self, "triangulation_")
        return np.array(sorted(self.triangulation_.edge_set()),
                        dtype=np.int64).reshape(-1, 2)

    def stretch_report(self):
        check_is_fitted(self, "triangulation_")
        return stretch_factor(self.triangulation_)

    def stretch_factor(self) -> float:
        return self.stretch_report().max_ratio

    def route(self, i: int, j: int):
        check_is_fitted(self, "triangulation_")
        return route(self.triangulation_, int(i), int(j))
