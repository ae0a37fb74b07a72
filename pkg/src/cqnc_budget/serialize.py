"""CSV and JSON files for spectrum series.

CSV holds one header row (axis label, then channels) and one row per
point, numbers written with ``%.17g`` so every double survives a round
trip. JSON additionally carries the run metadata. Both writers are
deterministic: the same series always produces the same bytes.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .sweeps import SpectrumSeries

FORMATS = ("csv", "json")


def _fmt(x):
    return "%.17g" % x


def dumps_series(series: SpectrumSeries, fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = list(series.channel_values)
        w.writerow([series.axis_label] + names)
        cols = [series.axis_values] + [series.channel_values[n] for n in names]
        for row in zip(*cols):
            w.writerow([_fmt(x) for x in row])
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "axis": {"label": series.axis_label,
                     "values": [float(x) for x in series.axis_values]},
            "channels": {n: [float(x) for x in v] for n, v in series.channel_values.items()},
            "metadata": series.metadata,
        }
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")


def loads_series(text: str, fmt: str = "csv") -> SpectrumSeries:
    if fmt == "csv":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty CSV document")
        header, body = rows[0], rows[1:]
        data = np.array([[float(x) for x in r] for r in body]).reshape(len(body), len(header))
        return SpectrumSeries(header[0], data[:, 0],
                              {n: data[:, i + 1] for i, n in enumerate(header[1:])}, {})
    if fmt == "json":
        doc = json.loads(text)
        return SpectrumSeries(doc["axis"]["label"], np.array(doc["axis"]["values"], dtype=float),
                              {n: np.array(v, dtype=float) for n, v in doc["channels"].items()},
                              doc["metadata"])
    raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")


def write_series(series: SpectrumSeries, path, fmt: str | None = None) -> None:
    """Write to ``path``; the format defaults to the file suffix."""
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".").lower()
    path.write_text(dumps_series(series, fmt), encoding="utf-8", newline="")


def read_series(path, fmt: str | None = None) -> SpectrumSeries:
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".").lower()
    return loads_series(path.read_text(encoding="utf-8"), fmt)
