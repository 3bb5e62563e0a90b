"""
Deterministic CSV/JSON writers.  Floats use 17 significant digits and the
C locale; every file starts with a metadata block.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__


def fmt(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _clean(obj):
    # complex/numpy values become JSON-native, NaN becomes null
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    if hasattr(obj, "tolist"):
        return _clean(obj.tolist())
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def metadata(**extra) -> dict:
    return {"tool": "nonunitary-lab", "version": __version__, **extra}


def render_csv(columns: Sequence[str], rows: Iterable[Sequence], meta: dict) -> str:
    lines = [f"# {k}: {json.dumps(_clean(v), sort_keys=True)}" for k, v in sorted(meta.items())]
    lines.append(",".join(columns))
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def render_json(payload: dict, meta: dict) -> str:
    return json.dumps(_clean({"meta": meta, **payload}), sort_keys=True, indent=1) + "\n"


def write_text(text: str, out: str | Path | None) -> None:
    if out is None or str(out) == "-":
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
