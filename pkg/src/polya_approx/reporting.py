"""CSV/JSON serialization with round-trip-safe float formatting."""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence

__all__ = ["format_value", "csv_text", "json_text"]


def format_value(v) -> str:
    """17 significant digits for floats, plain ``str`` for everything else."""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float) or (hasattr(v, "dtype") and getattr(v.dtype, "kind", "") == "f"):
        return format(float(v), ".17g")
    return str(v)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    """A CSV document with exactly one header row and ``\\n`` line endings."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def json_text(doc) -> str:
    # Python's float repr is already shortest round-trip
    return json.dumps(_jsonable(doc), indent=2, sort_keys=False) + "\n"
