"""Deterministic text rendering for reports and tables.

Floats always print with 17 significant digits (lossless decimal round-trip
for doubles), keys keep insertion order, and there is no environment- or
time-dependent content, so identical inputs render byte-identically.
"""

from __future__ import annotations

import math

__all__ = ["format17", "render_json"]


def format17(v: float) -> str:
    """17-significant-digit decimal rendering of a finite float."""
    if not math.isfinite(v):
        raise ValueError(f"refusing to serialize non-finite value {v!r}")
    return "%.17g" % (v,)


def _render(obj, out: list[str]) -> None:
    if isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif obj is None:
        out.append("null")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format17(obj))
    elif isinstance(obj, str):
        escaped = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        out.append(f'"{escaped}"')
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            _render(str(k), out)
            out.append(": ")
            _render(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _render(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_json(obj) -> str:
    """Render a tree of dict/list/str/int/float/bool/None as JSON text with
    floats at 17 significant digits."""
    out: list[str] = []
    _render(obj, out)
    out.append("\n")
    return "".join(out)
