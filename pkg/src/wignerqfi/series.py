"""Curve containers and their CSV / JSON serialisation.

Floats are written with ``repr`` (shortest round-trip form), so identical
inputs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class CurveSeries:
    name: str
    abscissa_label: str
    ordinate_label: str
    x: tuple
    y: tuple
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        x = tuple(float(a) for a in self.x)
        y = tuple(float(b) for b in self.y)
        if len(x) != len(y):
            raise ValueError("x and y differ in length")
        if any(b <= a for a, b in zip(x, x[1:])):
            raise ValueError(f"abscissa of {self.name!r} must be strictly increasing")
        if not all(math.isfinite(t) for t in x + y):
            raise ValueError(f"series {self.name!r} contains non-finite values")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def points(self):
        return list(zip(self.x, self.y))

    def as_arrays(self):
        return np.array(self.x), np.array(self.y)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "abscissa_label": self.abscissa_label,
            "ordinate_label": self.ordinate_label,
            "x": list(self.x),
            "y": list(self.y),
            "metadata": dict(self.metadata),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CurveSeries":
        return cls(d["name"], d["abscissa_label"], d["ordinate_label"], d["x"], d["y"], d.get("metadata", {}))


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    return str(value)


def series_to_csv(s: CurveSeries) -> str:
    buf = io.StringIO()
    buf.write(f"# name: {s.name}\n")
    for key in sorted(s.metadata):
        buf.write(f"# {key}: {_fmt(s.metadata[key])}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([s.abscissa_label, s.ordinate_label])
    for a, b in zip(s.x, s.y):
        w.writerow([repr(a), repr(b)])
    return buf.getvalue()


def series_from_csv(text: str) -> CurveSeries:
    meta, rows = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition(": ")
            meta[key] = val
        elif line:
            rows.append(line)
    header, *body = list(csv.reader(rows))
    xs = [float(r[0]) for r in body]
    ys = [float(r[1]) for r in body]
    name = meta.pop("name")
    return CurveSeries(name, header[0], header[1], xs, ys, meta)


def _finite_check(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        raise ValueError("refusing to emit a non-finite number")
    if isinstance(obj, dict):
        for v in obj.values():
            _finite_check(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _finite_check(v)
    return obj


def dumps_json(payload: dict) -> str:
    doc = {"schema_version": SCHEMA_VERSION, **payload}
    return json.dumps(_finite_check(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"


def series_set_to_json(command: str, series: list, metadata: dict | None = None) -> str:
    return dumps_json({
        "command": command,
        "metadata": metadata or {},
        "series": [s.to_dict() for s in series],
    })


def series_set_from_json(text: str) -> list:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    return [CurveSeries.from_dict(d) for d in doc["series"]]
