"""JSON file formats: point sets, triangulations, reports, certificates.

Coordinates are stored exactly as ``[x_num, x_den, y_num, y_den]``.
Floats are written with 17 significant digits, which round-trips every
binary64 value.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

from .delaunay import Edge, Triangle, Triangulation, rotate45
from .geometry import AxisSquare, Point, PointSet
from .router import Frame, Inequality, RouteCertificate, RouteStep
from .spanner import StretchReport

SCHEMA_VERSION = 1


class FormatError(ValueError):
    pass


# ----------------------------------------------------------------------------
# writer


def dumps(obj, indent: int | None = 1) -> str:
    parts: list[str] = []
    _emit(obj, parts, indent, 0)
    return "".join(parts) + "\n"


def _float(v: float) -> str:
    if math.isnan(v) or math.isinf(v):
        raise FormatError(f"cannot serialise non-finite float {v!r}")
    s = format(v, ".17g")
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def _emit(obj, out, indent, level):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_float(obj))
    elif hasattr(obj, "dtype"):          # numpy scalar
        _emit(obj.item(), out, indent, level)
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        pad, inner = _pads(indent, level)
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            out.append(("," if i else "") + inner + json.dumps(str(k)) + ": ")
            _emit(v, out, indent, level + 1)
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        flat = all(not isinstance(v, (list, tuple, dict)) for v in obj)
        if flat:
            out.append("[")
            for i, v in enumerate(obj):
                if i:
                    out.append(", ")
                _emit(v, out, indent, level + 1)
            out.append("]")
            return
        pad, inner = _pads(indent, level)
        out.append("[")
        for i, v in enumerate(obj):
            out.append(("," if i else "") + inner)
            _emit(v, out, indent, level + 1)
        out.append(pad + "]")
    else:
        raise FormatError(f"cannot serialise {type(obj).__name__}")


def _pads(indent, level):
    if indent is None:
        return "", ""
    return "\n" + " " * (indent * level), "\n" + " " * (indent * (level + 1))


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: {e}") from None


def _check_kind(doc, kind):
    if not isinstance(doc, dict):
        raise FormatError("document must be a JSON object")
    v = doc.get("schema_version", SCHEMA_VERSION)
    if v != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema_version {v!r}")
    if doc.get("kind", kind) != kind:
        raise FormatError(f"expected a {kind} document, got {doc.get('kind')}")


# ----------------------------------------------------------------------------
# exact numbers


def frac_pair(q) -> list[int]:
    q = Fraction(q)
    return [q.numerator, q.denominator]


def pair_frac(v) -> Fraction:
    if not (isinstance(v, (list, tuple)) and len(v) == 2
            and all(isinstance(c, int) and not isinstance(c, bool)
                    for c in v)):
        raise FormatError(f"bad rational {v!r}")
    if v[1] <= 0:
        raise FormatError(f"denominator must be positive in {v!r}")
    return Fraction(v[0], v[1])


def point_quad(p: Point) -> list[int]:
    return frac_pair(p.x) + frac_pair(p.y)


def quad_point(pid: int, q) -> Point:
    if not (isinstance(q, (list, tuple)) and len(q) == 4):
        raise FormatError(f"point {pid}: expected [xn, xd, yn, yd], got {q!r}")
    return Point(pid, pair_frac(q[:2]), pair_frac(q[2:]))


def square_list(sq: AxisSquare | None):
    if sq is None:
        return None
    return frac_pair(sq.west) + frac_pair(sq.south) + frac_pair(sq.side)


def list_square(v) -> AxisSquare | None:
    if v is None:
        return None
    if len(v) != 6:
        raise FormatError(f"bad square {v!r}")
    return AxisSquare(pair_frac(v[0:2]), pair_frac(v[2:4]), pair_frac(v[4:6]))


# ----------------------------------------------------------------------------
# point sets


def pointset_to_json(P: PointSet, labels=None) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "kind": "pointset",
           "points": [point_quad(p) for p in P]}
    ids = P.ids
    if ids != list(range(len(ids))):
        doc["ids"] = ids
    if labels is not None:
        doc["labels"] = list(labels)
    return doc


def pointset_from_json(doc) -> PointSet:
    _check_kind(doc, "pointset")
    pts = doc.get("points")
    if not isinstance(pts, list):
        raise FormatError("missing 'points' list")
    ids = doc.get("ids", list(range(len(pts))))
    if len(ids) != len(pts):
        raise FormatError("'ids' and 'points' differ in length")
    if len(set(ids)) != len(ids):
        raise FormatError("duplicate ids")
    return PointSet(quad_point(i, q) for i, q in zip(ids, pts))


def read_pointset(path) -> PointSet:
    return pointset_from_json(read_json(path))


def write_pointset(P: PointSet, path, labels=None) -> None:
    write_json(pointset_to_json(P, labels), path)


# ----------------------------------------------------------------------------
# triangulations


def triangulation_to_json(T: Triangulation) -> dict:
    doc = pointset_to_json(T.points)
    doc["kind"] = "triangulation"
    doc["metric"] = T.metric
    doc["squares_frame"] = "input" if T.geometry is T.points else "rotated"
    doc["edges"] = [[e.u, e.v, square_list(e.witness)] for e in
                    sorted(T.edges, key=lambda e: e.key)]
    doc["triangles"] = [list(t.vertices) + [square_list(t.circumsquare)]
                        for t in sorted(T.triangles, key=lambda t: t.vertices)]
    return doc


def triangulation_from_json(doc) -> Triangulation:
    _check_kind(doc, "triangulation")
    P = pointset_from_json({**doc, "kind": "pointset"})
    metric = doc.get("metric", "linf")
    G = P if metric == "linf" else P.mapped(rotate45)
    edges = []
    for row in doc.get("edges", []):
        u, v, sq = row
        if u not in P or v not in P:
            raise FormatError(f"edge ({u},{v}) names an unknown point")
        edges.append(Edge(u, v, list_square(sq)))
    tris = []
    for row in doc.get("triangles", []):
        *vs, sq = row
        if len(vs) != 3 or any(v not in P for v in vs):
            raise FormatError(f"bad triangle {row!r}")
        tris.append(Triangle(tuple(vs), list_square(sq)))
    return Triangulation(P, edges, tris, metric=metric,
                         geometry=None if G is P else G)


# ----------------------------------------------------------------------------
# reports


def report_to_json(R: StretchReport, pairs: bool = True) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "kind": "stretch-report",
           "metric": R.metric, "n": len(R.ids), "pair_count": len(R),
           "max_ratio": R.max_ratio,
           "argmax": list(R.argmax) if R.argmax else None,
           "min_margin": R.min_margin if len(R) else None,
           "argmin_margin": list(R.argmin_margin) if len(R) else None,
           "extent": R.extent, "bound_holds": R.bound_holds()}
    if pairs:
        doc["pairs"] = [
            {"pair": [int(u), int(v)], "d_T": float(dt), "d2": float(e),
             "ratio": float(r), "margin": float(m)}
            for u, v, dt, e, r, m in zip(R.pair_u, R.pair_v, R.d_T, R.d2,
                                         R.ratio, R.margin)]
    return doc


def pair_report_to_json(rec: dict, metric: str) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": "pair-report",
            "metric": metric, **rec}


# ----------------------------------------------------------------------------
# certificates


def _step_to_json(st: RouteStep) -> dict:
    return {"case": st.case, "a": st.a, "b": st.b,
            "frame": st.frame.to_json(), "x": st.x, "y": st.y,
            "bound": st.bound, "length": st.length, "path": list(st.path),
            "details": st.details,
            "inequalities": [q.to_json() for q in st.inequalities],
            "children": [_step_to_json(c) for c in st.children]}


def _step_from_json(d) -> RouteStep:
    return RouteStep(
        d["case"], d["a"], d["b"], Frame.from_json(d["frame"]),
        float(d["x"]), float(d["y"]), list(d["path"]), float(d["length"]),
        [Inequality(q["label"], float(q["bound"]), float(q["value"]))
         for q in d["inequalities"]],
        [_step_from_json(c) for c in d["children"]], dict(d["details"]))


def certificate_to_json(C: RouteCertificate, T: Triangulation) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "kind": "route-certificate",
           "metric": C.metric, "pair": [C.a, C.b], "frame": C.frame.to_json(),
           "x": C.x, "y": C.y, "bound": C.bound, "length": C.length,
           "slack": C.slack, "shrink": C.shrink, "extent": C.extent,
           "path": list(C.path_vertices),
           "edge_lengths": [T.length(u, v) for u, v in
                            zip(C.path_vertices, C.path_vertices[1:])],
           "trace": _step_to_json(C.root)}
    pts = pointset_to_json(T.points)
    doc["points"] = pts["points"]
    if "ids" in pts:
        doc["ids"] = pts["ids"]
    return doc


def certificate_from_json(doc) -> tuple[RouteCertificate, PointSet]:
    """The certificate plus the point set embedded in it."""
    _check_kind(doc, "route-certificate")
    P = pointset_from_json({"points": doc["points"],
                            **({"ids": doc["ids"]} if "ids" in doc else {})})
    a, b = doc["pair"]
    C = RouteCertificate(a, b, doc["metric"], Frame.from_json(doc["frame"]),
                         float(doc["x"]), float(doc["y"]),
                         tuple(doc["path"]), float(doc["length"]),
                         _step_from_json(doc["trace"]),
                         float(doc.get("shrink", 1.0)),
                         float(doc.get("extent", 1.0)))
    return C, P
