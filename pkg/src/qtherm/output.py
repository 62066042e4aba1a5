"""Deterministic CSV / JSON / SVG writers (12 significant digits, infinities as strings)."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

SIG_DIGITS = 12


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.{SIG_DIGITS}g}"


def jsonable(obj):
    """Round floats to 12 significant digits; +-inf become the strings "inf"/"-inf"."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return float(f"{x:.{SIG_DIGITS}g}")
    return obj


def dumps_json(obj) -> str:
    return json.dumps(jsonable(obj), indent=2) + "\n"


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)
    return path


def svg_line_chart(x, series: dict, title: str = "", width: int = 640, panel_height: int = 160) -> str:
    """Stacked line panels, one per series, sharing the x axis."""
    x = np.asarray(x, dtype=float)
    margin_l, margin_r, margin_t, gap = 70, 20, 30, 30
    h = margin_t + len(series) * (panel_height + gap)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{h}" viewBox="0 0 {width} {h}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-family="sans-serif" font-size="14">{title}</text>',
    ]
    x0, x1 = float(np.nanmin(x)), float(np.nanmax(x))
    xs = (x1 - x0) or 1.0
    pw = width - margin_l - margin_r
    for k, (name, y) in enumerate(series.items()):
        y = np.asarray(y, dtype=float)
        top = margin_t + k * (panel_height + gap)
        y0, y1 = float(np.nanmin(y)), float(np.nanmax(y))
        ys = (y1 - y0) or 1.0
        pts = " ".join(
            f"{margin_l + (xi - x0) / xs * pw:.2f},{top + panel_height - (yi - y0) / ys * panel_height:.2f}"
            for xi, yi in zip(x, y)
            if math.isfinite(yi)
        )
        out += [
            f'<rect x="{margin_l}" y="{top}" width="{pw}" height="{panel_height}" fill="none" stroke="#888"/>',
            f'<polyline fill="none" stroke="#1f5fa8" stroke-width="1.5" points="{pts}"/>',
            f'<text x="{margin_l + 4}" y="{top + 14}" font-family="sans-serif" font-size="12">{name}</text>',
            f'<text x="{margin_l - 4}" y="{top + 10}" text-anchor="end" font-family="sans-serif" font-size="10">{fmt(y1)[:10]}</text>',
            f'<text x="{margin_l - 4}" y="{top + panel_height}" text-anchor="end" font-family="sans-serif" font-size="10">{fmt(y0)[:10]}</text>',
        ]
    out.append("</svg>")
    return "\n".join(out) + "\n"
