"""Deterministic JSON output with doubles printed to 17 significant digits."""
from __future__ import annotations

import json
import math

import numpy as np


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def _encode(obj, indent, level, out):
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    sep = "," if indent is None else ","
    if obj is None or obj is True or obj is False:
        out.append(json.dumps(obj))
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, key in enumerate(sorted(obj, key=str)):
            if i:
                out.append(sep)
            out.append(pad)
            out.append(json.dumps(str(key)))
            out.append(": ")
            _encode(obj[key], indent, level + 1, out)
        out.append(end + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in items)
        out.append("[")
        for i, v in enumerate(items):
            if i:
                out.append(", " if flat or indent is None else sep)
            if not flat:
                out.append(pad)
            _encode(v, indent, level + 1, out)
        out.append("]" if flat else end + "]")
    elif hasattr(obj, "to_dict"):
        _encode(obj.to_dict(), indent, level, out)
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int | None = 2) -> str:
    """JSON text with sorted keys; non-finite floats become null."""
    out: list = []
    _encode(obj, indent, 0, out)
    return "".join(out)


def loads(text: str):
    return json.loads(text)
