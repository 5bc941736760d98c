"""Canonical numeric serialization.

All machine-readable output (JSON and CSV) carries 17 significant digits,
enough to round-trip IEEE doubles exactly, with '\n' line endings. The
writers below are deterministic so identical data produces identical bytes.
"""
import json
import math
import os
import tempfile

import numpy as np


def format_float(x):
    """Render a float with 17 significant digits ('nan' for missing cells)."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _emit(obj, parts):
    if obj is None:
        parts.append("null")
    elif isinstance(obj, bool):
        parts.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        parts.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        # JSON has no NaN literal; missing cells become null
        parts.append("null" if math.isnan(x) else format(x, ".17g"))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, np.ndarray):
        _emit(obj.tolist(), parts)
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, item in enumerate(obj):
            if i:
                parts.append(", ")
            _emit(item, parts)
        parts.append("]")
    elif isinstance(obj, dict):
        parts.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                parts.append(", ")
            if not isinstance(key, str):
                raise TypeError(f"JSON keys must be strings, got {type(key).__name__}")
            parts.append(json.dumps(key))
            parts.append(": ")
            _emit(value, parts)
        parts.append("}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj):
    """Serialize to a single-line JSON string with canonical float formatting."""
    parts = []
    _emit(obj, parts)
    parts.append("\n")
    return "".join(parts)


def rows_to_csv(rows, header=None):
    """Render rows of numbers (or strings) as canonical CSV text.

    header, if given, is written first as a '#'-prefixed comment line.
    """
    lines = []
    if header is not None:
        lines.append("# " + header)
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            elif isinstance(cell, (int, np.integer)):
                cells.append(str(int(cell)))
            else:
                cells.append(format_float(cell))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def atomic_write_text(path, text):
    """Write text to path atomically (temp file in the same dir, then rename)."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
