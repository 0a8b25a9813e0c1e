"""Deterministic text output: 17-significant-digit floats in CSV and JSON."""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

SCHEMA_VERSION = 1


def fmt(x) -> str:
    """Integers verbatim, floats with 17 significant digits, locale independent."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _json(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_json(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + _json(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else json.dumps(str(float(obj)))
    return json.dumps(str(obj))


def dumps_json(doc: dict, indent: int = 2) -> str:
    """Sorted-key JSON with a ``schema_version`` field and 17-digit float literals."""
    doc = {"schema_version": SCHEMA_VERSION, **doc}
    return _json(doc, indent, 0) + "\n"


def dumps_csv(columns, rows) -> str:
    """Header plus one line per row; lists are joined with ';'."""
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=",", lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([";".join(map(str, v)) if isinstance(v, (list, tuple)) else
                    (v if isinstance(v, str) else fmt(v)) for v in (row[c] for c in columns)])
    return buf.getvalue()
