"""Command line surface: tessellation listings, shear and lambda files,
finite-window diagnostics, and SVG renders.

Every command takes an explicit --depth (default 8) and prints deterministic
output: tables as CSV with headers or as a single JSON document via
--format, numbers always at 17 significant digits.  Exit codes: 0 success,
1 input error, 2 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import io as _io
import sys
from fractions import Fraction

from .criteria import chain_series, qs_bound, symmetric_diagnostic, teich_proximity
from .farey import (
    ChainError,
    DepthExceededError,
    FareyEdge,
    NotFareyEdgeError,
    shared_tessellation,
    validate_chain,
)
from .io import (
    FileFormatError,
    fmt_num,
    json_document,
    read_lambda_file,
    read_shear_file,
    realization_rows,
    series_report_rows,
    window_report_rows,
    write_csv,
    write_lambda_file,
    write_shear_file,
)
from .lambda_lengths import arc_ratio_bound, develop, shear_from_lambda, wedge_series
from .moebius import DegenerateInputError
from .rationals import ExtendedRational
from .render import RenderSpec, render_svg
from .shear import (
    CharacteristicMap,
    MonotonicityError,
    builtin_homeo,
    shear_from_homeo,
)

__all__ = ["main"]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


# argument parsing helpers


def _parse_number(text):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    if "/" in text:
        return Fraction(text)
    return float(text)


def _parse_params(text):
    if not text:
        return ()
    return tuple(_parse_number(p) for p in text.split(","))


def _parse_index_spec(text):
    """Window index spec: 'a..b' inclusive range or comma-separated integers."""
    text = text.strip()
    if ".." in text:
        a, b = text.split("..", 1)
        lo, hi = int(a), int(b)
        if lo > hi:
            raise ValueError(f"empty index range {text!r}")
        return range(lo, hi + 1)
    return [int(p) for p in text.split(",")]


def _parse_vertices(text):
    return [ExtendedRational.parse(p) for p in text.split(",")]


def _parse_chain(text):
    return validate_chain([FareyEdge.from_key(k) for k in text.split(",")])


def _read_file(path, reader, kind):
    try:
        with open(path, encoding="utf-8") as fp:
            return reader(fp, source=path)
    except OSError as err:
        raise FileFormatError(f"cannot read {kind} file: {err}") from None


def _emit(args, text):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)


def _table_text(args, header, rows, summary):
    """CSV table (summary goes on stdout separately) or one JSON document."""
    if args.format == "json":
        doc = dict(summary)
        doc["rows"] = [dict(zip(header, r)) for r in rows]
        return json_document(doc), None
    buf = _io.StringIO()
    write_csv(buf, header, rows)
    line = " ".join(f"{k}={_num(v)}" for k, v in summary.items())
    return buf.getvalue(), line


def _finish_table(args, header, rows, summary):
    text, line = _table_text(args, header, rows, summary)
    _emit(args, text)
    if line is not None:
        print(line)


def _warn_truncated(reports, depth):
    if any(rep.truncated for rep in reports.values()):
        print(f"warning: some windows reach past depth {depth}; "
              "out-of-depth edges use the map's default value", file=sys.stderr)


def _num(x):
    if x is None:
        return "none"
    return fmt_num(x) if isinstance(x, float) else x


# commands


def _cmd_tessellate(args):
    tess = shared_tessellation(args.depth)
    rows = [("edge", e.key, tess.edge_gen[e])
            for e in sorted(tess.edges(args.depth),
                            key=lambda e: (tess.edge_gen[e], e.sort_key()))]
    tris = sorted(
        tess.triangles,
        key=lambda r: (r.level, tuple(v.sort_key() for v in
                                      sorted(r.verts, key=lambda v: v.sort_key()))))
    for rec in tris:
        verts = sorted(rec.verts, key=lambda v: v.sort_key())
        rows.append(("triangle", "|".join(v.key for v in verts), rec.level))
    _finish_table(args, ("kind", "key", "generation"), rows,
                  {"tessellate": "done", "depth": args.depth,
                   "edges": sum(r[0] == "edge" for r in rows),
                   "triangles": sum(r[0] == "triangle" for r in rows)})
    return 0


def _cmd_shear_from_map(args):
    h = builtin_homeo(args.family, *_parse_params(args.params))
    s = shear_from_homeo(h, args.depth)
    buf = _io.StringIO()
    write_shear_file(s, buf, keep_defaults=args.keep_zeros)
    _emit(args, buf.getvalue())
    return 0


def _cmd_char_map(args):
    s = _read_file(args.shear, read_shear_file, "shear")
    depth = args.depth
    cm = CharacteristicMap(s, levels=depth)
    if args.vertices:
        verts = _parse_vertices(args.vertices)
    else:
        verts = shared_tessellation(depth).vertices()
    rows = [(v.key, float(cm(v))) for v in verts]
    _finish_table(args, ("vertex", "image"), rows,
                  {"char-map": s.name if hasattr(s, "name") else "ok",
                   "depth": depth, "vertices": len(rows)})
    return 0


def _window_args(args):
    m_range = _parse_index_spec(args.window_m) if args.window_m else None
    k_range = _parse_index_spec(args.window_k) if args.window_k else None
    tips = _parse_vertices(args.tips) if args.tips else None
    return tips, m_range, k_range


def _cmd_qs_check(args):
    s = _read_file(args.shear, read_shear_file, "shear")
    tips, m_range, k_range = _window_args(args)
    reports, sup = qs_bound(s, tips, m_range, k_range, args.depth)
    _warn_truncated(reports, args.depth)
    header, rows = window_report_rows(reports)
    _finish_table(args, header, rows,
                  {"qs-check": "bounded-evidence", "M-hat": sup,
                   "depth": args.depth, "tips": len(reports), "windows": len(rows)})
    return 0


def _cmd_sym_check(args):
    s = _read_file(args.shear, read_shear_file, "shear")
    buckets = _parse_index_spec(args.buckets) if args.buckets else None
    profile = symmetric_diagnostic(s, buckets, args.depth)
    rows = [(g, d) for g, d in sorted(profile.items())]
    last_g, last_d = max(profile.items())
    _finish_table(args, ("generation_bucket", "max_deviation"), rows,
                  {"sym-check": "profile", "depth": args.depth,
                   "tail-bucket": last_g, "tail-deviation": last_d})
    return 0


def _cmd_homeo_check(args):
    s = _read_file(args.shear, read_shear_file, "shear")
    chain = _parse_chain(args.chain)
    n = args.terms if args.terms else len(chain) - 1
    rep = chain_series(s, chain, n)
    header, rows = series_report_rows(rep)
    _finish_table(args, header, rows,
                  {"homeo-check": rep.verdict, "N": n,
                   "partial-sum": rep.partials[-1],
                   "tail-estimate": rep.tail_estimate,
                   "depth": args.depth})
    return 0


def _cmd_lambda_to_shear(args):
    lam = _read_file(args.lam, read_lambda_file, "lambda")
    s = shear_from_lambda(lam, args.depth)
    buf = _io.StringIO()
    write_shear_file(s, buf, keep_defaults=args.keep_zeros)
    _emit(args, buf.getvalue())
    return 0


def _cmd_lambda_check_e(args):
    lam = _read_file(args.lam, read_lambda_file, "lambda")
    tips, m_range, k_range = _window_args(args)
    reports, sup = arc_ratio_bound(lam, tips, m_range, k_range, args.depth)
    _warn_truncated(reports, args.depth)
    header, rows = window_report_rows(reports)
    _finish_table(args, header, rows,
                  {"check-e": "bounded-evidence", "K-hat": sup,
                   "depth": args.depth, "tips": len(reports), "windows": len(rows)})
    return 0


def _cmd_lambda_series_d(args):
    lam = _read_file(args.lam, read_lambda_file, "lambda")
    chain = _parse_chain(args.chain)
    n = args.terms if args.terms else len(chain) - 1
    rep = wedge_series(lam, chain, n, first_weight=args.first_weight, arc=args.arc)
    header, rows = series_report_rows(rep)
    _finish_table(args, header, rows,
                  {"series-d": rep.verdict, "N": n, "arc": args.arc,
                   "partial-sum": rep.partials[-1],
                   "tail-estimate": rep.tail_estimate,
                   "depth": args.depth})
    return 0


def _cmd_lambda_develop(args):
    lam = _read_file(args.lam, read_lambda_file, "lambda")
    real = develop(lam, args.depth)
    header, rows = realization_rows(real)
    _finish_table(args, header, rows,
                  {"develop": "exact" if real.exact else "float",
                   "depth": args.depth, "vertices": len(rows),
                   "defaulted-edges": len(real.defaulted_edges)})
    return 0


def _cmd_distance(args):
    s1 = _read_file(args.shear, read_shear_file, "shear")
    s2 = _read_file(args.shear2, read_shear_file, "shear")
    tips, m_range, k_range = _window_args(args)
    sup = teich_proximity(s1, s2, tips, m_range, k_range, args.depth)
    summary = {"distance": "teich-proximity", "value": sup,
               "depth": args.depth}
    if args.format == "json":
        _emit(args, json_document(summary))
    else:
        _emit(args, " ".join(f"{k}={v}" for k, v in summary.items()) + "\n")
    return 0


def _cmd_render(args):
    vertex_map = None
    if args.shear and args.lam:
        raise _UsageError("render: give either --shear or --lambda, not both")
    if args.shear:
        s = _read_file(args.shear, read_shear_file, "shear")
        vertex_map = CharacteristicMap(s, levels=args.depth)
    elif args.lam:
        lam = _read_file(args.lam, read_lambda_file, "lambda")
        vertex_map = develop(lam, args.depth).position
    spec = RenderSpec(depth=args.depth, model=args.model, stroke=args.stroke,
                      size=args.size,
                      highlight=frozenset(args.highlight.split(","))
                      if args.highlight else frozenset())
    _emit(args, render_svg(spec, vertex_map))
    return 0


# parser assembly


def _add_common(p, fmt=True):
    p.add_argument("--depth", type=int, default=8,
                   help="tessellation depth (default 8)")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    if fmt:
        p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_window_flags(p):
    p.add_argument("--window-m", default=None, metavar="SPEC",
                   help="fan center indices: 'a..b' or comma list (default: all in depth)")
    p.add_argument("--window-k", default=None, metavar="SPEC",
                   help="window radii: 'a..b' or comma list (default: all in depth)")
    p.add_argument("--tips", default=None,
                   help="comma-separated tip vertices 'p/q' (default: all in depth)")


def _build_parser():
    root = _Parser(prog="fareyshear", description=__doc__)
    sub = root.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tessellate", help="list edges and triangles with generations")
    _add_common(p)
    p.set_defaults(func=_cmd_tessellate)

    p = sub.add_parser("shear-from-map", help="shear file of a built-in boundary map")
    p.add_argument("--family", required=True,
                   choices=("moebius", "piecewise_linear", "power", "fan_earthquake"))
    p.add_argument("--params", default="", help="comma-separated numbers")
    p.add_argument("--keep-zeros", action="store_true",
                   help="keep entries equal to the default value")
    _add_common(p, fmt=False)
    p.set_defaults(func=_cmd_shear_from_map)

    p = sub.add_parser("char-map", help="evaluate the characteristic map at vertices")
    p.add_argument("--shear", required=True, help="shear file")
    p.add_argument("--vertices", default=None,
                   help="comma-separated vertices 'p/q' (default: all in depth)")
    _add_common(p)
    p.set_defaults(func=_cmd_char_map)

    p = sub.add_parser("qs-check", help="finite-window quasisymmetry bound")
    p.add_argument("--shear", required=True)
    _add_window_flags(p)
    _add_common(p)
    p.set_defaults(func=_cmd_qs_check)

    p = sub.add_parser("sym-check", help="small-scale conformality profile")
    p.add_argument("--shear", required=True)
    p.add_argument("--buckets", default=None, metavar="SPEC",
                   help="generation buckets: 'a..b' or comma list")
    _add_common(p)
    p.set_defaults(func=_cmd_sym_check)

    p = sub.add_parser("homeo-check", help="chain series homeomorphism evidence")
    p.add_argument("--shear", required=True)
    p.add_argument("--chain", required=True, help="comma-separated edge keys")
    p.add_argument("--terms", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_homeo_check)

    lam = sub.add_parser("lambda", help="lambda-length commands")
    lsub = lam.add_subparsers(dest="lambda_command", required=True)

    p = lsub.add_parser("to-shear", help="shear map of a developed lambda function")
    p.add_argument("--lambda", dest="lam", required=True, help="lambda file")
    p.add_argument("--keep-zeros", action="store_true")
    _add_common(p, fmt=False)
    p.set_defaults(func=_cmd_lambda_to_shear)

    p = lsub.add_parser("check-e", help="window bound of wedge-arc ratios")
    p.add_argument("--lambda", dest="lam", required=True)
    _add_window_flags(p)
    _add_common(p)
    p.set_defaults(func=_cmd_lambda_check_e)

    p = lsub.add_parser("series-d", help="weighted wedge-arc series along a chain")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--chain", required=True, help="comma-separated edge keys")
    p.add_argument("--terms", type=int, default=None)
    p.add_argument("--first-weight", type=float, default=None)
    p.add_argument("--arc", choices=("geometric", "formula"), default="geometric")
    _add_common(p)
    p.set_defaults(func=_cmd_lambda_series_d)

    p = lsub.add_parser("develop", help="realize a lambda function: positions and horocycles")
    p.add_argument("--lambda", dest="lam", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_lambda_develop)

    p = sub.add_parser("distance", help="finite-window proximity of two shear maps")
    p.add_argument("--shear", required=True)
    p.add_argument("--shear2", required=True)
    _add_window_flags(p)
    _add_common(p)
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("render", help="SVG of the image tessellation")
    p.add_argument("--shear", default=None)
    p.add_argument("--lambda", dest="lam", default=None)
    p.add_argument("--model", choices=("disk", "half-plane-clip"), default="disk")
    p.add_argument("--stroke", type=float, default=0.004)
    p.add_argument("--size", type=int, default=800)
    p.add_argument("--highlight", default=None, help="comma-separated edge keys")
    _add_common(p, fmt=False)
    p.set_defaults(func=_cmd_render)

    return root


def main(argv=None):
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except _UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (DegenerateInputError, MonotonicityError, OverflowError,
            ZeroDivisionError) as err:
        print(f"degeneracy: {err}", file=sys.stderr)
        return 2
    except (FileFormatError, NotFareyEdgeError, ChainError, DepthExceededError,
            ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
