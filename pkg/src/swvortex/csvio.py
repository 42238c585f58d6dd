"""CSV files with a ``#``-prefixed metadata header.

Layout::

    # swvortex 0.1.0
    # key = <json value>
    ...
    col_a,col_b,...
    1.0,2.0,...

With ``full_precision`` floats are written with ``repr`` and read back
bit-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import __version__

DEFAULT_FORMAT = "{:.12e}"


@dataclass
class CsvData:
    metadata: Dict[str, object]
    columns: List[str]
    data: np.ndarray

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]


def _format_value(value, fmt: Optional[Callable], full_precision: bool):
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if full_precision:
        return repr(value)
    if fmt is None:
        return DEFAULT_FORMAT.format(value)
    return fmt(value)


def _jsonable(value):
    if isinstance(value, tuple):
        return list(value)
    if isinstance(value, np.generic):
        return value.item()
    return value


def write_csv(
    stream,
    columns: Sequence[str],
    rows,
    metadata: Optional[dict] = None,
    full_precision: bool = False,
    formats: Optional[Dict[str, Callable]] = None,
):
    """Write ``rows`` (sequence of sequences) to an open text ``stream``."""
    formats = formats or {}
    stream.write(f"# swvortex {__version__}\n")
    for key, value in (metadata or {}).items():
        stream.write(f"# {key} = {json.dumps(_jsonable(value))}\n")
    stream.write(",".join(columns) + "\n")
    fmts = [formats.get(c) for c in columns]
    for row in rows:
        stream.write(",".join(_format_value(v, f, full_precision) for v, f in zip(row, fmts)))
        stream.write("\n")


def read_csv(path) -> CsvData:
    """Parse a file written by :func:`write_csv`."""
    metadata: Dict[str, object] = {}
    columns: Optional[List[str]] = None
    values = []
    with open(path) as f:
        for line in f:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if " = " in body:
                    key, raw = body.split(" = ", 1)
                    metadata[key] = json.loads(raw)
                elif body.startswith("swvortex "):
                    metadata["version"] = body.split(" ", 1)[1]
                continue
            if columns is None:
                columns = line.split(",")
                continue
            values.append([float(v) for v in line.split(",")])
    if columns is None:
        raise ValueError(f"{path}: no column header found")
    data = np.array(values, dtype=float).reshape(len(values), len(columns))
    return CsvData(metadata, columns, data)
