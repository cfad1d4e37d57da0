"""Command-line front end: ``linf-spanner gen|triangulate|analyze|route|svg``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import formats
from .delaunay import Triangulation, triangulate, validate_triangulation
from .generators import (DISTRIBUTIONS, ChewFamilyParams, chew_path_stretch,
                         chew_stretch_closed_form, generate_chew_family,
                         random_pointset)
from .geometry import GeneralPositionError, PointSet
from .router import RouteError, route
from .spanner import pair_record, stretch_factor
from .svg import render_svg

log = logging.getLogger("linf_spanner")


class CliError(Exception):
    def __init__(self, message, code=2, payload=None):
        super().__init__(message)
        self.code = code
        self.payload = payload


def _load(path, metric) -> Triangulation:
    """Triangulation from a point-set or triangulation file."""
    doc = formats.read_json(path)
    kind = doc.get("kind", "pointset") if isinstance(doc, dict) else None
    if kind == "triangulation":
        T = formats.triangulation_from_json(doc)
        if metric is not None and T.metric != metric:
            raise CliError(f"{path} holds an {T.metric} triangulation, "
                           f"not {metric}")
        bad = validate_triangulation(T)
        if bad:
            raise CliError(f"{path}: invalid triangulation",
                           payload=[str(v) for v in bad])
        return T
    P = formats.pointset_from_json(doc)
    return triangulate(P, metric or "linf")


def cmd_gen(args) -> int:
    if args.family == "chew":
        if args.m is None:
            raise CliError("--family chew needs --m")
        try:
            params = ChewFamilyParams(args.m, args.precision)
        except ValueError as e:
            raise CliError(str(e)) from None
        F = generate_chew_family(params)
        labels = ([f"p{i}" for i in range(len(F.p_ids))]
                  + [f"q{i}" for i in range(len(F.q_ids))])
        formats.write_pointset(F.points, args.out, labels=labels)
        d = float(F.delta)
        print(f"points {len(F.points)}")
        print(f"delta {d:.17g}")
        print(f"closed_form_stretch {chew_stretch_closed_form(d):.17g}")
        print(f"path_stretch {chew_path_stretch(d):.17g}")
        return 0
    if args.random is None or args.seed is None:
        raise CliError("give --family chew --m M, or --random N --seed S")
    if args.random < 2:
        raise CliError("--random needs at least 2 points")
    P = random_pointset(args.random, args.seed, args.dist)
    formats.write_pointset(P, args.out)
    print(f"points {len(P)}")
    return 0


def cmd_triangulate(args) -> int:
    P = formats.read_pointset(args.input)
    T = triangulate(P, args.metric)
    formats.write_json(formats.triangulation_to_json(T), args.out)
    again = formats.triangulation_from_json(formats.read_json(args.out))
    bad = validate_triangulation(again)
    print(f"vertices {len(T.points)} edges {len(T.edges)} "
          f"triangles {len(T.triangles)}")
    if bad:
        raise CliError("written triangulation fails validation", 1,
                       [str(v) for v in bad])
    return 0


def cmd_analyze(args) -> int:
    T = _load(args.input, args.metric)
    if args.pair:
        a, b = args.pair
        _check_ids(T.points, a, b)
        rec = pair_record(T, a, b)
        formats.write_json(formats.pair_report_to_json(rec, T.metric),
                           args.out)
        print(f"d_T {rec['d_T']:.17g} ratio {rec['ratio']:.17g} "
              f"margin {rec['margin']:.17g}")
        return 0 if rec["margin"] >= -1e-9 * T.points.extent else 1
    R = stretch_factor(T)
    formats.write_json(formats.report_to_json(R, pairs=not args.summary),
                       args.out)
    print(f"max_ratio {R.max_ratio:.17g} at {R.argmax}")
    print(f"min_margin {R.min_margin:.17g}")
    return 0 if R.bound_holds() else 1


def cmd_route(args) -> int:
    T = _load(args.input, args.metric)
    a, b = args.pair
    _check_ids(T.points, a, b)
    try:
        C = route(T, a, b)
    except RouteError as e:
        raise CliError(f"route failed: {e}", 1) from None
    formats.write_json(formats.certificate_to_json(C, T), args.out)
    C2, P2 = formats.certificate_from_json(formats.read_json(args.out))
    bad = C2.validate(triangulate(P2, C2.metric))
    print(f"length {C.length:.17g} bound {C.bound:.17g} "
          f"slack {C.slack:.17g}")
    if bad:
        raise CliError("certificate fails validation on reload", 1, bad)
    return 0


def cmd_svg(args) -> int:
    T = _load(args.input, args.metric)
    cert = None
    if args.route:
        cert, _ = formats.certificate_from_json(formats.read_json(args.route))
        if cert.metric != T.metric:
            T = _load(args.input, cert.metric)
        bad = cert.validate(T)
        if bad:
            raise CliError("route does not fit this triangulation", 1, bad)
    if args.squares:
        _check_ids(T.points, *args.squares)
    Path(args.out).write_text(render_svg(T, cert, args.squares))
    return 0


def _check_ids(P: PointSet, *ids):
    for i in ids:
        if i not in P:
            raise CliError(f"unknown point id {i}")
    if len(set(ids)) < len(ids):
        raise CliError("pair endpoints must differ")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="linf-spanner",
        description="L-infinity / L1 Delaunay triangulations and their "
                    "stretch factors.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a point set")
    g.add_argument("--family", choices=["chew"])
    g.add_argument("--m", type=int)
    g.add_argument("--precision", type=int, default=10 ** 9,
                   help="denominator bound for the sqrt2 approximation")
    g.add_argument("--random", type=int, metavar="N")
    g.add_argument("--seed", type=int)
    g.add_argument("--dist", choices=DISTRIBUTIONS, default="uniform-box")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("triangulate", help="build the Delaunay triangulation")
    t.add_argument("--in", dest="input", required=True)
    t.add_argument("--metric", choices=["linf", "l1"], default="linf")
    t.add_argument("--out", required=True)
    t.set_defaults(func=cmd_triangulate)

    an = sub.add_parser("analyze", help="stretch factor and bound margins")
    an.add_argument("--in", dest="input", required=True)
    an.add_argument("--metric", choices=["linf", "l1"], default=None)
    an.add_argument("--pair", type=int, nargs=2, metavar=("A", "B"))
    an.add_argument("--summary", action="store_true",
                    help="omit the per-pair table")
    an.add_argument("--out", required=True)
    an.set_defaults(func=cmd_analyze)

    r = sub.add_parser("route", help="certified path between two points")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--metric", choices=["linf", "l1"], default=None)
    r.add_argument("--pair", type=int, nargs=2, metavar=("A", "B"),
                   required=True)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_route)

    s = sub.add_parser("svg", help="draw a triangulation")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--metric", choices=["linf", "l1"], default=None)
    s.add_argument("--route", help="certificate file to overlay")
    s.add_argument("--squares", type=int, nargs=2, metavar=("A", "B"),
                   help="draw the witness or crossing squares of a pair")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_svg)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else
                        logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.payload:
            print(json.dumps(e.payload, indent=1), file=sys.stderr)
        return e.code
    except GeneralPositionError as e:
        print("error: point set is not in general position", file=sys.stderr)
        print(json.dumps([{"rule": v.rule, "ids": list(v.ids)}
                          for v in e.violations], indent=1), file=sys.stderr)
        return 2
    except (formats.FormatError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
