"""Report tables and SVG plots with byte-deterministic rendering.

Values are stored at full precision and rounded only here, per column, so
the displayed tables match the published example layouts without losing
testability upstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import EmptyData, SchemaMismatch

GLYPHS = {"good": "✓", "bad": "/", "none": "X"}
ASCII_GLYPHS = {"good": "ok", "bad": "bad", "none": "none"}


@dataclass(frozen=True)
class Column:
    header: str
    kind: str = "text"  # number | glyph | text
    digits: Optional[int] = None  # rounding applied at render time
    unit: str = ""

    def __post_init__(self):
        if self.kind not in ("number", "glyph", "text"):
            raise ValueError(f"bad column kind {self.kind!r}")


@dataclass
class ReportTable:
    title: str
    columns: list[Column]
    rows: list[list] = field(default_factory=list)

    def add_row(self, *cells) -> None:
        self.rows.append(list(cells))


def _format_cell(cell, column: Column, ascii_glyphs: bool) -> str:
    if cell is None:
        return ""
    if column.kind == "glyph":
        table = ASCII_GLYPHS if ascii_glyphs else GLYPHS
        if cell not in table:
            raise SchemaMismatch(f"{column.header}: glyph cell {cell!r} not in {sorted(table)}")
        return table[cell]
    if column.kind == "number":
        if isinstance(cell, str):
            raise SchemaMismatch(f"{column.header}: expected a number, got {cell!r}")
        value = float(cell)
        if math.isnan(value):
            return "nan"
        if column.digits is None:
            return repr(value)
        return f"{value:.{column.digits}f}"
    return str(cell)


def _validate(table: ReportTable) -> None:
    for i, row in enumerate(table.rows):
        if len(row) != len(table.columns):
            raise SchemaMismatch(
                f"{table.title}: row {i} has {len(row)} cells, expected {len(table.columns)}"
            )


def render_table(table: ReportTable, fmt: str = "md", ascii_glyphs: bool = False) -> bytes:
    """Render one table to UTF-8 bytes; identical input gives identical bytes."""
    _validate(table)
    if fmt == "md":
        text = _render_md(table, ascii_glyphs)
    elif fmt == "csv":
        text = _render_csv(table, ascii_glyphs)
    elif fmt == "json":
        text = _render_json(table, ascii_glyphs)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return text.encode("utf-8")


def _header_text(col: Column) -> str:
    return f"{col.header} ({col.unit})" if col.unit else col.header


def _render_md(table: ReportTable, ascii_glyphs: bool) -> str:
    headers = [_header_text(c) for c in table.columns]
    lines = [f"### {table.title}", ""]
    lines.append("| " + " | ".join(headers) + " |")
    lines.append("| " + " | ".join("---" for _ in headers) + " |")
    for row in table.rows:
        cells = [_format_cell(c, col, ascii_glyphs) for c, col in zip(row, table.columns)]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def _csv_quote(text: str) -> str:
    if any(ch in text for ch in ",\"\n"):
        return '"' + text.replace('"', '""') + '"'
    return text


def _render_csv(table: ReportTable, ascii_glyphs: bool) -> str:
    lines = [",".join(_csv_quote(_header_text(c)) for c in table.columns)]
    for row in table.rows:
        cells = [_format_cell(c, col, ascii_glyphs) for c, col in zip(row, table.columns)]
        lines.append(",".join(_csv_quote(c) for c in cells))
    return "\n".join(lines) + "\n"


def _render_json(table: ReportTable, ascii_glyphs: bool) -> str:
    import json

    rows = []
    for row in table.rows:
        entry = {}
        for cell, col in zip(row, table.columns):
            if col.kind == "number" and cell is not None:
                value = float(cell)
                entry[_header_text(col)] = round(value, col.digits) if col.digits is not None else value
            else:
                entry[_header_text(col)] = _format_cell(cell, col, ascii_glyphs)
        rows.append(entry)
    return json.dumps({"title": table.title, "rows": rows}, indent=2, ensure_ascii=False) + "\n"


def render_tables(tables: Sequence[ReportTable], fmt: str = "md", ascii_glyphs: bool = False) -> bytes:
    """Concatenate several tables; blocks are blank-line separated."""
    if fmt == "json":
        import json

        docs = [json.loads(render_table(t, "json", ascii_glyphs)) for t in tables]
        return (json.dumps(docs, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    return b"\n".join(render_table(t, fmt, ascii_glyphs) for t in tables)


# --- SVG plots -------------------------------------------------------------------

_SVG_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
    'viewBox="0 0 {w} {h}">\n'
)


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def plot_svg(kind: str, data) -> bytes:
    """Render a plot to standalone SVG bytes, deterministically.

    kinds:
      ncap-scatter: data is a list of (label, level, potential) points,
                    level on x in [0, 4], potential on y.
      deviation:    data is a list of (t seconds, deviation meters) samples.
    """
    if kind == "ncap-scatter":
        return _ncap_scatter(data)
    if kind == "deviation":
        return _deviation_plot(data)
    raise ValueError(f"unknown plot kind {kind!r}")


def _ncap_scatter(points: Sequence[tuple[str, float, float]]) -> bytes:
    if not points:
        raise EmptyData("no systems to plot")
    w, h, margin = 480, 360, 50.0
    x_max = 4.0
    y_max = max(4.0, math.ceil(max(p[2] for p in points)))

    def sx(x):
        return margin + (w - 2 * margin) * x / x_max

    def sy(y):
        return h - margin - (h - 2 * margin) * y / y_max

    parts = [_SVG_HEADER.format(w=w, h=h)]
    parts.append(
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>\n'
    )
    # axes
    parts.append(
        f'<line x1="{_fmt(sx(0))}" y1="{_fmt(sy(0))}" x2="{_fmt(sx(x_max))}" '
        f'y2="{_fmt(sy(0))}" stroke="black"/>\n'
    )
    parts.append(
        f'<line x1="{_fmt(sx(0))}" y1="{_fmt(sy(0))}" x2="{_fmt(sx(0))}" '
        f'y2="{_fmt(sy(y_max))}" stroke="black"/>\n'
    )
    for i in range(int(x_max) + 1):
        parts.append(
            f'<text x="{_fmt(sx(i))}" y="{_fmt(sy(0) + 18)}" font-size="11" '
            f'text-anchor="middle">{i}</text>\n'
        )
    ticks = 4
    for i in range(ticks + 1):
        y = y_max * i / ticks
        parts.append(
            f'<text x="{_fmt(sx(0) - 8)}" y="{_fmt(sy(y) + 4)}" font-size="11" '
            f'text-anchor="end">{y:.1f}</text>\n'
        )
    parts.append(
        f'<text x="{_fmt(sx(x_max / 2))}" y="{_fmt(h - 10)}" font-size="12" '
        'text-anchor="middle">autonomy level</text>\n'
    )
    parts.append(
        f'<text x="14" y="{_fmt(sy(y_max / 2))}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 14 {_fmt(sy(y_max / 2))})">component potential</text>\n'
    )
    for label, level, potential in sorted(points):
        parts.append(
            f'<circle cx="{_fmt(sx(level))}" cy="{_fmt(sy(potential))}" r="4" fill="black"/>\n'
        )
        parts.append(
            f'<text x="{_fmt(sx(level) + 7)}" y="{_fmt(sy(potential) - 6)}" '
            f'font-size="11">{label}</text>\n'
        )
    parts.append("</svg>\n")
    return "".join(parts).encode("utf-8")


def _deviation_plot(samples: Sequence[tuple[float, float]]) -> bytes:
    if not samples:
        raise EmptyData("no deviation samples")
    w, h, margin = 480, 240, 45.0
    t0 = samples[0][0]
    t1 = samples[-1][0]
    span = (t1 - t0) or 1.0
    d_max = max(d for _, d in samples) or 1.0

    def sx(t):
        return margin + (w - 2 * margin) * (t - t0) / span

    def sy(d):
        return h - margin - (h - 2 * margin) * d / d_max

    parts = [_SVG_HEADER.format(w=w, h=h)]
    parts.append(f'<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>\n')
    parts.append(
        f'<line x1="{_fmt(sx(t0))}" y1="{_fmt(sy(0))}" x2="{_fmt(sx(t1))}" '
        f'y2="{_fmt(sy(0))}" stroke="black"/>\n'
    )
    parts.append(
        f'<line x1="{_fmt(sx(t0))}" y1="{_fmt(sy(0))}" x2="{_fmt(sx(t0))}" '
        f'y2="{_fmt(sy(d_max))}" stroke="black"/>\n'
    )
    path = " ".join(f"{_fmt(sx(t))},{_fmt(sy(d))}" for t, d in samples)
    parts.append(f'<polyline points="{path}" fill="none" stroke="black"/>\n')
    parts.append(
        f'<text x="{_fmt(w / 2)}" y="{_fmt(h - 8)}" font-size="12" '
        'text-anchor="middle">time (s)</text>\n'
    )
    parts.append(
        f'<text x="14" y="{_fmt(h / 2)}" font-size="12" text-anchor="middle" '
        f'transform="rotate(-90 14 {_fmt(h / 2)})">deviation (m)</text>\n'
    )
    parts.append("</svg>\n")
    return "".join(parts).encode("utf-8")
