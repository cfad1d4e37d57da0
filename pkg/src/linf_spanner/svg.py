"""Static SVG 1.1 drawings of triangulations and routes."""
from __future__ import annotations

from xml.sax.saxutils import escape

from .delaunay import Triangulation
from .geometry import AxisSquare
from .router import crossing_sequence

SIZE = 800.0
MARGIN = 30.0


class _Canvas:
    def __init__(self, T: Triangulation):
        xs = [float(p.x) for p in T.points]
        ys = [float(p.y) for p in T.points]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys)) or 1.0
        self.k = (SIZE - 2 * MARGIN) / span
        self.w = (max(xs) - self.x0) * self.k + 2 * MARGIN
        self.h = (self.y1 - min(ys)) * self.k + 2 * MARGIN

    def __call__(self, x, y) -> tuple[float, float]:
        return (MARGIN + (float(x) - self.x0) * self.k,
                MARGIN + (self.y1 - float(y)) * self.k)


def _square_corners(sq: AxisSquare, T: Triangulation):
    """Corners of a witness square in input coordinates (L1 squares live in
    the rotated frame and come back as diamonds)."""
    cs = sq.corners()
    if T.geometry is T.points:
        return cs
    # inverse of (x, y) -> (x - y, x + y)
    return [((u + v) / 2, (v - u) / 2) for u, v in cs]


def render_svg(T: Triangulation, route=None, squares_for=None,
               labels: bool = True) -> str:
    """SVG text for ``T``.

    ``route`` is a :class:`RouteCertificate` (or a vertex sequence) to
    highlight; ``squares_for`` a pair ``(u, v)`` whose edge witness, or
    crossing squares, are drawn.
    """
    C = _Canvas(T)
    P = T.points
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           f'width="{C.w:.1f}" height="{C.h:.1f}" '
           f'viewBox="0 0 {C.w:.1f} {C.h:.1f}">',
           '<rect width="100%" height="100%" fill="white"/>']
    if squares_for is not None:
        for sq in _squares(T, *squares_for):
            pts = " ".join("%.2f,%.2f" % C(x, y)
                           for x, y in _square_corners(sq, T))
            out.append(f'<polygon points="{pts}" fill="none" stroke="#888" '
                       f'stroke-dasharray="4 3" stroke-width="1"/>')
    out.append('<g stroke="#333" stroke-width="1">')
    for u, v in sorted(T.edge_set()):
        (x1, y1), (x2, y2) = C(P[u].x, P[u].y), C(P[v].x, P[v].y)
        out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" '
                   f'y2="{y2:.2f}"/>')
    out.append("</g>")
    if route is not None:
        vs = list(getattr(route, "path_vertices", route))
        out.append('<g stroke="#d62728" stroke-width="3" fill="none">')
        total = 0.0
        for u, v in zip(vs, vs[1:]):
            ln = T.length(u, v)
            total += ln
            (x1, y1), (x2, y2) = C(P[u].x, P[u].y), C(P[v].x, P[v].y)
            out.append(f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" '
                       f'y2="{y2:.2f}"><title>{u}-{v}: {ln:.17g}'
                       f'</title></line>')
        out.append("</g>")
        out.append(f'<text x="{MARGIN:.1f}" y="{C.h - 8:.1f}" '
                   f'font-size="12" font-family="sans-serif">route '
                   f'{escape(str(vs[0]))} to {escape(str(vs[-1]))}, length '
                   f'{total:.17g}</text>')
    out.append('<g fill="black" font-size="10" font-family="sans-serif">')
    for p in P:
        cx, cy = C(p.x, p.y)
        out.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="2.5"/>')
        if labels:
            out.append(f'<text x="{cx + 4:.2f}" y="{cy - 4:.2f}">{p.id}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _squares(T: Triangulation, u: int, v: int) -> list[AxisSquare]:
    if T.has_edge(u, v):
        w = T.edge(u, v).witness
        return [w] if w is not None else []
    seq = crossing_sequence(T, u, v)
    out = []
    for tri in seq.triangles[1:]:
        t = T.triangle(*tri)
        if t is not None and t.circumsquare is not None:
            out.append(t.circumsquare)
    return out
