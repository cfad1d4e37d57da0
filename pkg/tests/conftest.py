"""Shared oracles and fixtures."""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from linf_spanner import PointSet, validate_general_position


def brute_force_edges(P: PointSet) -> set[tuple[int, int]]:
    """Delaunay edges by enumerating every square pinned by the input.

    Side lengths run over all coordinate differences, and the west (south)
    side over ``x_p`` and ``x_p - s`` (``y_p``, ``y_p - s``) for every
    point ``p``. Each candidate with an empty open interior makes all
    pairs of points on its boundary adjacent.
    """
    ids = np.array(P.ids)
    ic = P.int_coords
    assert max(abs(c) for v in ic.values() for c in v) < 2 ** 40, \
        "oracle expects small integer coordinates"
    xy = np.array([ic[i] for i in P.ids], dtype=np.int64)
    xs, ys = xy[:, 0], xy[:, 1]
    sides = np.unique(np.concatenate([
        np.abs(xs[:, None] - xs[None, :]).ravel(),
        np.abs(ys[:, None] - ys[None, :]).ravel()]))
    sides = sides[sides > 0]
    edges = set()
    for s in sides:
        W = np.unique(np.concatenate([xs, xs - s]))
        S = np.unique(np.concatenate([ys, ys - s]))
        gw, gs = np.meshgrid(W, S, indexing="ij")
        gw, gs = gw.ravel(), gs.ravel()
        inside = ((xs[None, :] > gw[:, None]) & (xs[None, :] < gw[:, None] + s)
                  & (ys[None, :] > gs[:, None]) & (ys[None, :] < gs[:, None] + s))
        empty = ~inside.any(axis=1)
        gw, gs = gw[empty], gs[empty]
        closed = ((xs[None, :] >= gw[:, None]) & (xs[None, :] <= gw[:, None] + s)
                  & (ys[None, :] >= gs[:, None])
                  & (ys[None, :] <= gs[:, None] + s))
        for row in np.unique(closed, axis=0):
            on = ids[row]
            for u, v in itertools.combinations(sorted(on.tolist()), 2):
                edges.add((u, v))
    return edges


def floyd_warshall(T) -> tuple[list[int], np.ndarray]:
    ids = sorted(T.points.ids)
    pos = {v: i for i, v in enumerate(ids)}
    n = len(ids)
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0.0)
    for (u, v), ln in T.lengths.items():
        D[pos[u], pos[v]] = D[pos[v], pos[u]] = ln
    for k in range(n):
        D = np.minimum(D, D[:, k:k + 1] + D[k:k + 1, :])
    return ids, D


@st.composite
def general_position_sets(draw, min_size=2, max_size=12, span=10 ** 6):
    """Integer point sets with distinct coordinates and no co-square
    quadruple."""
    n = draw(st.integers(min_size, max_size))
    xs = draw(st.lists(st.integers(0, span), min_size=n, max_size=n,
                       unique=True))
    ys = draw(st.lists(st.integers(0, span), min_size=n, max_size=n,
                       unique=True))
    P = PointSet.from_coords(list(zip(xs, ys)))
    from hypothesis import assume
    assume(not validate_general_position(P))
    return P


@pytest.fixture
def six_points():
    """Six points whose crossing sequence from 0 to 1 changes h and l in
    turn."""
    F = Fraction
    return PointSet.from_coords([(0, F("0.35")), (6, F("1.15")),
                                 (F("0.5"), F("1.5")), (1, 0),
                                 (2, F("2.25")), (4, F("-0.5"))])


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def record_criterion(key: str, ok: bool, detail: str) -> None:
    ACCEPTANCE[key] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (len(k), k)):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(
            f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
