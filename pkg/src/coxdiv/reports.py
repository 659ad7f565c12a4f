"""Report serialization: CSV tables, the Div(n)/n SVG chart, and the
run manifest.

All writers are deterministic (fixed column order, fixed decimal
formatting, sorted JSON keys) so reruns are byte-comparable.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from typing import Optional

from . import __version__
from .divergence import DivergenceReport
from .errors import ConfigError
from .walls import PWTReport, PencilReport

PENCIL_COLUMNS = ("n", "min_parallel", "witness_word")
PWT_COLUMNS = ("wall_id", "Cpp_hat", "n_scanned")
DIVERGENCE_COLUMNS = ("n", "div_value", "unbounded_flag", "witness_a",
                      "witness_b", "witness_c", "pairs_scanned", "status")

NOT_FOUND = "NOT_FOUND"


def _csv_text(columns, records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(records)
    return buf.getvalue()


def pencil_csv(report: PencilReport) -> str:
    records = [
        (row.n, row.min_parallel, ".".join(str(i) for i in row.witness_word))
        for row in report.rows
    ]
    return _csv_text(PENCIL_COLUMNS, records)


def pwt_csv(report: PWTReport) -> str:
    records = [
        (row.wall_id,
         NOT_FOUND if row.cpp_hat is None else row.cpp_hat,
         row.n_scanned)
        for row in report.rows
    ]
    return _csv_text(PWT_COLUMNS, records)


def divergence_csv(report: DivergenceReport) -> str:
    records = []
    for row in report.rows:
        records.append((
            row.n,
            "" if row.value is None else row.value,
            1 if row.unbounded else 0,
            row.witness_a, row.witness_b, row.witness_c,
            row.pairs_scanned,
            row.status,
        ))
    return _csv_text(DIVERGENCE_COLUMNS, records)


def parse_csv(text: str) -> list:
    """Round-trip reader: list of dict rows keyed by the header."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ConfigError("empty CSV")
    header = rows[0]
    return [dict(zip(header, r)) for r in rows[1:]]


# -- SVG chart -----------------------------------------------------------

_W, _H = 640, 400
_ML, _MR, _MT, _MB = 60, 20, 20, 50


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def emit_plot(report: DivergenceReport) -> str:
    """Deterministic SVG line chart of Div(n)/n against n.

    Unbounded rows are drawn as a gap with a marked glyph on the axis.
    """
    if not report.rows:
        raise ConfigError("cannot plot an empty report")
    pts = [(row.n, row.value / row.n) for row in report.rows
           if row.value is not None]
    gaps = [row.n for row in report.rows if row.value is None]
    xs = [row.n for row in report.rows]
    x_min, x_max = min(xs), max(xs)
    y_max = max([y for _, y in pts], default=1.0)
    y_max = max(y_max, 1.0)
    span_x = max(x_max - x_min, 1)

    def px(n):
        return _ML + (n - x_min) * (_W - _ML - _MR) / span_x

    def py(y):
        return _H - _MB - y * (_H - _MT - _MB) / y_max

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" '
        'stroke="black"/>',
        f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" '
        'stroke="black"/>',
        f'<text x="{_W // 2}" y="{_H - 12}" text-anchor="middle" '
        'font-family="monospace" font-size="14">n</text>',
        f'<text x="16" y="{_H // 2}" text-anchor="middle" '
        f'font-family="monospace" font-size="14" '
        f'transform="rotate(-90 16 {_H // 2})">Div(n)/n</text>',
    ]
    for n in xs:
        x = _fmt(px(n))
        parts.append(
            f'<line x1="{x}" y1="{_H - _MB}" x2="{x}" y2="{_H - _MB + 5}" '
            'stroke="black"/>')
        parts.append(
            f'<text x="{x}" y="{_H - _MB + 20}" text-anchor="middle" '
            f'font-family="monospace" font-size="12">{n}</text>')
    for k in range(5):
        y = y_max * k / 4
        yy = _fmt(py(y))
        parts.append(
            f'<line x1="{_ML - 5}" y1="{yy}" x2="{_ML}" y2="{yy}" '
            'stroke="black"/>')
        parts.append(
            f'<text x="{_ML - 10}" y="{yy}" text-anchor="end" '
            f'font-family="monospace" font-size="12">{_fmt(y)}</text>')
    if pts:
        polyline = " ".join(f"{_fmt(px(n))},{_fmt(py(y))}" for n, y in pts)
        parts.append(
            f'<polyline points="{polyline}" fill="none" stroke="steelblue" '
            'stroke-width="2"/>')
        for n, y in pts:
            parts.append(
                f'<circle cx="{_fmt(px(n))}" cy="{_fmt(py(y))}" r="3" '
                'fill="steelblue"/>')
    for n in gaps:
        # gap marker: an open diamond pinned to the axis
        x = px(n)
        y = _H - _MB
        d = (f"M {_fmt(x)} {_fmt(y - 8)} L {_fmt(x + 6)} {_fmt(y)} "
             f"L {_fmt(x)} {_fmt(y + 8)} L {_fmt(x - 6)} {_fmt(y)} Z")
        parts.append(
            f'<path class="gap-marker" d="{d}" fill="none" stroke="crimson" '
            'stroke-width="2"/>')
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(y - 12)}" text-anchor="middle" '
            'font-family="monospace" font-size="11" '
            'fill="crimson">&#8734;</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# -- manifest ------------------------------------------------------------


def sha256_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def run_manifest(config: dict, outputs: dict, runtime_seconds: float,
                 seed: Optional[int] = None) -> str:
    """JSON manifest: config echo, version, runtime, seed, output digests.

    ``outputs`` maps file names to their byte content.  Runtime is
    rounded away in the digest-bearing fields, so reruns stay
    byte-comparable except for the wall-clock entry.
    """
    doc = {
        "config": config,
        "version": __version__,
        "runtime_seconds": round(runtime_seconds, 3),
        "seed": seed,
        "outputs": {
            name: {"bytes": len(data), "sha256": sha256_digest(data)}
            for name, data in sorted(outputs.items())
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
