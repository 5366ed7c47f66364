"""Shear and lambda files, CSV tables, and deterministic number formatting.

Shear and lambda files are JSON documents

    {"default": number, "depth": integer,
     "edges": [{"key": "p/q|r/s", "s": number}, ...]}

with "lambda" in place of "s" for lambda files.  Readers reject unknown and
duplicate keys and report positions; writers emit a fixed layout, sort edges
by (generation, endpoint order), and format every float with 17 significant
digits, so identical data always serializes to identical bytes.
"""

from __future__ import annotations

import csv
import json
import math

from .farey import FareyEdge, NotFareyEdgeError, generation
from .lambda_lengths import LambdaMap
from .shear import ShearMap

__all__ = [
    "FileFormatError",
    "fmt_num",
    "read_shear_file",
    "write_shear_file",
    "read_lambda_file",
    "write_lambda_file",
    "write_csv",
    "realization_rows",
    "window_report_rows",
    "series_report_rows",
    "json_document",
]

DROP_TOL = 1e-12


class FileFormatError(ValueError):
    """Malformed shear/lambda file; the message carries the location."""


def fmt_num(x):
    """Fixed decimal form: 17 significant digits, round-trip exact."""
    if isinstance(x, int):
        return repr(x)
    x = float(x)
    if math.isnan(x):
        raise ValueError("cannot serialize NaN")
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def _edge_order(e):
    return (generation(e), e.sort_key())


# readers


def _reject_duplicates(pairs):
    seen = set()
    for k, _ in pairs:
        if k in seen:
            raise FileFormatError(f"duplicate key {k!r} in the same object")
        seen.add(k)
    return dict(pairs)


def _load_json(fp, source):
    try:
        return json.load(fp, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as err:
        raise FileFormatError(
            f"{source}: line {err.lineno} column {err.colno}: {err.msg}") from None
    except FileFormatError as err:
        raise FileFormatError(f"{source}: {err}") from None


def _require_number(doc, field, source):
    v = doc[field]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise FileFormatError(f"{source}: {field!r} must be a number, got {v!r}")
    return v


def _read_edge_table(fp, source, value_field):
    doc = _load_json(fp, source)
    if not isinstance(doc, dict):
        raise FileFormatError(f"{source}: top level must be an object")
    expected = {"default", "depth", "edges"}
    extra = set(doc) - expected
    if extra:
        raise FileFormatError(
            f"{source}: unknown top-level keys {sorted(extra)}")
    missing = expected - set(doc)
    if missing:
        raise FileFormatError(
            f"{source}: missing top-level keys {sorted(missing)}")
    default = _require_number(doc, "default", source)
    depth = doc["depth"]
    if isinstance(depth, bool) or not isinstance(depth, int) or depth < 0:
        raise FileFormatError(
            f"{source}: 'depth' must be a non-negative integer, got {depth!r}")
    if not isinstance(doc["edges"], list):
        raise FileFormatError(f"{source}: 'edges' must be a list")
    support = {}
    for i, entry in enumerate(doc["edges"]):
        where = f"{source}: edges[{i}]"
        if not isinstance(entry, dict):
            raise FileFormatError(f"{where}: entry must be an object")
        extra = set(entry) - {"key", value_field}
        if extra:
            raise FileFormatError(f"{where}: unknown keys {sorted(extra)}")
        if "key" not in entry or value_field not in entry:
            raise FileFormatError(
                f"{where}: entry needs 'key' and {value_field!r}")
        key = entry["key"]
        if not isinstance(key, str):
            raise FileFormatError(f"{where}: 'key' must be a string")
        try:
            e = FareyEdge.from_key(key)
        except NotFareyEdgeError as err:
            raise FileFormatError(f"{where}: {err}") from None
        if e in support:
            raise FileFormatError(f"{where}: duplicate edge {e.key!r}")
        support[e] = _require_number(entry, value_field, where)
    return support, default, depth


def read_shear_file(fp, source="<shear>"):
    support, default, depth = _read_edge_table(fp, source, "s")
    return ShearMap(support, default, depth)


def read_lambda_file(fp, source="<lambda>"):
    support, default, depth = _read_edge_table(fp, source, "lambda")
    try:
        return LambdaMap(support, default, depth)
    except ValueError as err:
        raise FileFormatError(f"{source}: {err}") from None


# writers


def _write_edge_table(table, fp, value_field, keep_defaults):
    entries = sorted(table.support.items(), key=lambda kv: _edge_order(kv[0]))
    if not keep_defaults:
        entries = [(e, v) for e, v in entries
                   if abs(v - table.default) > DROP_TOL]
    fp.write("{\n")
    fp.write(f'  "default": {fmt_num(table.default)},\n')
    fp.write(f'  "depth": {table.depth},\n')
    if not entries:
        fp.write('  "edges": []\n}\n')
        return
    fp.write('  "edges": [\n')
    for i, (e, v) in enumerate(entries):
        comma = "," if i + 1 < len(entries) else ""
        fp.write(f'    {{"key": {json.dumps(e.key)}, '
                 f'"{value_field}": {fmt_num(v)}}}{comma}\n')
    fp.write("  ]\n}\n")


def write_shear_file(s, fp, keep_defaults=False):
    """Serialize a ShearMap; entries within 1e-12 of the default are dropped
    unless keep_defaults."""
    _write_edge_table(s, fp, "s", keep_defaults)


def write_lambda_file(lam, fp, keep_defaults=False):
    _write_edge_table(lam, fp, "lambda", keep_defaults)


# tabular output


def write_csv(fp, header, rows):
    """One fixed dialect: comma, LF line ends, minimal quoting; floats are
    written at 17 significant digits."""
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_num(v) if isinstance(v, float) else v for v in row])


def realization_rows(realization):
    """(header, rows) for a developed decoration: vertex, position, size."""
    verts = sorted(realization.vertex_positions, key=lambda v: v.sort_key())
    rows = [(v.key, float(realization.vertex_positions[v]),
             realization.horocycles[v].size) for v in verts]
    return ("vertex", "position", "horocycle_size"), rows


def window_report_rows(reports):
    """(header, rows) for per-tip fan window reports, deterministically ordered."""
    rows = []
    for tip in sorted(reports, key=lambda t: t.sort_key()):
        rep = reports[tip]
        for (m, k) in sorted(rep.ratios):
            rows.append((tip.key, m, k, rep.ratios[(m, k)]))
    return ("tip", "m", "k", "ratio"), rows


def series_report_rows(report):
    """(header, rows) for a chain series report: term index, term, partial sum."""
    rows = [(n + 1, t, p)
            for n, (t, p) in enumerate(zip(report.terms, report.partials))]
    return ("n", "term", "partial_sum"), rows


def json_document(obj):
    """Deterministic JSON text for report-shaped data (dict/list/str/num/None);
    floats through fmt_num, insertion order preserved."""
    out = []
    _emit(obj, out)
    out.append("\n")
    return "".join(out)


def _emit(obj, out):
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, float)):
        v = fmt_num(obj)
        out.append(json.dumps(v) if v in ("inf", "-inf") else v)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _emit(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _emit(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__} deterministically")
