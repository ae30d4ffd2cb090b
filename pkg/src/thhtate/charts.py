"""Chart emission for Tate pages: canonical JSON, TSV dimension grids, and a
static SVG dot chart.  All outputs are deterministic for a fixed input."""

from __future__ import annotations

import json

from .errors import ConfigError
from .fpcore import mono_to_str
from .reports import canonical_json

CHART_SCHEMA = "thhtate.chart@1"


def build_chart(page, spectrum):
    cells = {}
    if page.number == 2:
        for (s, w), monos in page.cells.items():
            cells[f"{s},{w}"] = [mono_to_str(m, page.page_table) for m in monos]
    else:
        for (s, w), dim in page.homology_dims.items():
            names = []
            for m in page.reps_monomial.get((s, w), []):
                names.append("?" if m is None else mono_to_str(m, page.page_table))
            cells[f"{s},{w}"] = names
    obj = {
        "schema": CHART_SCHEMA,
        "page": page.number,
        "spectrum": spectrum,
        "p": page.model.p,
        "window": {
            "s_min": page.window.s_min,
            "s_max": page.window.s_max,
            "d_min": page.window.d_min,
            "d_max": page.window.d_max,
        },
        "cells": cells,
    }
    if page.number == 3:
        obj["undetermined_rows"] = sorted(page.undetermined_rows)
    return obj


def chart_to_json(obj):
    return canonical_json(obj)


def chart_from_json(text):
    obj = json.loads(text)
    if obj.get("schema") != CHART_SCHEMA:
        raise ConfigError(f"not a chart document: schema {obj.get('schema')!r}")
    return obj


def _cell_items(obj):
    for key, names in obj["cells"].items():
        s_str, w_str = key.split(",")
        yield int(s_str), int(w_str), names


def chart_to_tsv(obj):
    """Dimension grid: one row per filtration s, one column per internal w."""
    dims = {}
    ss = set()
    ws = set()
    for s, w, names in _cell_items(obj):
        dims[(s, w)] = len(names)
        ss.add(s)
        ws.add(w)
    if not dims:
        return "s\\w\n"
    s_range = range(max(ss), min(ss) - 1, -1)
    w_range = range(min(ws), max(ws) + 1)
    lines = ["s\\w\t" + "\t".join(str(w) for w in w_range)]
    for s in s_range:
        row = [str(s)] + [str(dims.get((s, w), 0)) for w in w_range]
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def chart_to_svg(obj):
    """Static dot chart in the (s, w) plane; dot area tracks the dimension."""
    cells = [(s, w, len(names)) for s, w, names in _cell_items(obj) if names]
    if not cells:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="80" height="40"></svg>\n'
    ss = [c[0] for c in cells]
    ws = [c[1] for c in cells]
    scale = 14
    pad = 30
    width = (max(ss) - min(ss) + 1) * scale + 2 * pad
    height = (max(ws) - min(ws) + 1) * scale + 2 * pad
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<text x="4" y="12" font-size="10">page {obj["page"]} '
        f'{obj["spectrum"]} p={obj["p"]}</text>',
    ]
    for s, w, dim in sorted(cells):
        x = pad + (s - min(ss)) * scale
        y = height - pad - (w - min(ws)) * scale
        radius = 2 + min(dim, 5)
        parts.append(f'<circle cx="{x}" cy="{y}" r="{radius}" fill="black"/>')
        if dim > 1:
            parts.append(
                f'<text x="{x + radius + 1}" y="{y + 3}" font-size="8">{dim}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
