"""Summary tables and SVG line charts from per-frame metrics CSVs."""

from __future__ import annotations

import csv
import statistics
from dataclasses import dataclass
from pathlib import Path

from .errors import SchemaError
from .evaluation import read_metrics_csv

METRICS = ("keypoints", "matches_prev", "psnr_db", "ssim")

# Direction annotations mirror how the metrics are read: visible snow
# inflates keypoint counts, so fewer is better after cleaning, while
# more frame-to-frame matches mean more stable features.
AXIS_LABELS = {
    "keypoints": "keypoints per frame (lower is better)",
    "matches_prev": "matches to previous frame (higher is better)",
    "psnr_db": "PSNR (dB)",
    "ssim": "SSIM",
}

SUMMARY_COLUMNS = ("sequence_id", "method", "metric", "mean", "median", "min", "max")

_PALETTE = ("#1f6fb2", "#d1495b", "#3a8751", "#8a5fbe", "#c07a1f", "#4a4a4a")

SVG_WIDTH = 960
SVG_HEIGHT = 540
_MARGIN_L = 72.0
_MARGIN_R = 24.0
_MARGIN_T = 48.0
_MARGIN_B = 56.0


@dataclass
class ChartSpec:
    metric: str
    out_path: str
    smoothing_window: int = 15
    methods: tuple = ()
    sequence_id: str | None = None

    def __post_init__(self):
        if self.metric not in METRICS:
            raise SchemaError(f"unknown metric {self.metric!r}, expected one of {METRICS}")
        if self.smoothing_window < 1 or self.smoothing_window % 2 == 0:
            raise ValueError("smoothing_window must be odd and >= 1")
        self.methods = tuple(self.methods)


@dataclass
class SummaryRow:
    sequence_id: str
    method: str
    metric: str
    mean: float
    median: float
    min: float
    max: float


def _series_by_group(rows: list[dict], metric: str) -> dict:
    """(sequence_id, method) -> [(t, value)] sorted by t.

    matches_prev is undefined at t=0 and left blank in the CSV; blank
    cells are skipped so statistics cover only defined values.
    """
    groups: dict = {}
    for row in rows:
        raw = row[metric]
        if raw == "":
            continue
        key = (row["sequence_id"], row["method"])
        groups.setdefault(key, []).append((int(row["t"]), float(raw)))
    for series in groups.values():
        series.sort()
    return groups


def summarize(csv_paths) -> list[SummaryRow]:
    """Per (sequence, method, metric) mean/median/min/max over frames."""
    rows: list[dict] = []
    for path in csv_paths:
        rows.extend(read_metrics_csv(path))
    out: list[SummaryRow] = []
    for metric in METRICS:
        for (seq_id, method), series in sorted(_series_by_group(rows, metric).items()):
            values = [v for _, v in series]
            out.append(SummaryRow(
                sequence_id=seq_id,
                method=method,
                metric=metric,
                mean=statistics.fmean(values),
                median=statistics.median(values),
                min=min(values),
                max=max(values),
            ))
    out.sort(key=lambda r: (r.sequence_id, r.method, METRICS.index(r.metric)))
    return out


def write_summary_csv(rows: list[SummaryRow], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for r in rows:
            writer.writerow([r.sequence_id, r.method, r.metric,
                             f"{r.mean:.6f}", f"{r.median:.6f}",
                             f"{r.min:.6f}", f"{r.max:.6f}"])


def format_summary_table(rows: list[SummaryRow]) -> str:
    """Aligned plain-text rendering of the summary rows."""
    cells = [list(SUMMARY_COLUMNS)]
    for r in rows:
        cells.append([r.sequence_id, r.method, r.metric,
                      f"{r.mean:.4f}", f"{r.median:.4f}",
                      f"{r.min:.4f}", f"{r.max:.4f}"])
    widths = [max(len(row[i]) for row in cells) for i in range(len(SUMMARY_COLUMNS))]
    lines = []
    for n, row in enumerate(cells):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def moving_average(values: list[float], window: int) -> list[float]:
    """Centered moving average; windows shrink at the edges instead of padding."""
    if window < 1 or window % 2 == 0:
        raise ValueError("window must be odd and >= 1")
    half = window // 2
    n = len(values)
    out = []
    for i in range(n):
        lo = max(0, i - half)
        hi = min(n, i + half + 1)
        out.append(sum(values[lo:hi]) / (hi - lo))
    return out


def _pick_sequence(groups: dict, wanted: str | None) -> str:
    seq_ids = sorted({seq for seq, _ in groups})
    if wanted is not None:
        if wanted not in seq_ids:
            raise SchemaError(f"sequence_id {wanted!r} not present in metrics")
        return wanted
    return seq_ids[0]


def _svg_polyline(points: list[tuple], color: str, width: float,
                  opacity: float = 1.0) -> str:
    coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
    extra = f' stroke-opacity="{opacity:.2f}"' if opacity < 1.0 else ""
    return (f'<polyline fill="none" stroke="{color}" stroke-width="{width:.1f}"'
            f'{extra} points="{coords}"/>')


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if count < 2:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + step * i for i in range(count)]


def render_chart(spec: ChartSpec, csv_path) -> str:
    """One smoothed polyline per method over frame index, as standalone SVG.

    Output bytes are a pure function of (spec, CSV contents): series and
    methods are sorted, coordinates are emitted at fixed precision, and
    no timestamps or environment state are embedded.
    """
    rows = read_metrics_csv(csv_path)
    groups = _series_by_group(rows, spec.metric)
    if not groups:
        raise SchemaError(f"no rows with a {spec.metric!r} value")
    seq_id = _pick_sequence(groups, spec.sequence_id)
    methods = list(spec.methods) if spec.methods else sorted(
        {m for s, m in groups if s == seq_id})
    series = {}
    for method in methods:
        key = (seq_id, method)
        if key not in groups or len(groups[key]) < 2:
            raise SchemaError(
                f"method {method!r} has fewer than 2 points for {seq_id}"
            )
        series[method] = groups[key]

    smoothed = {
        m: [(t, v) for (t, _), v in zip(
            pts, moving_average([v for _, v in pts], spec.smoothing_window))]
        for m, pts in series.items()
    }
    all_t = [t for pts in series.values() for t, _ in pts]
    all_v = [v for pts in smoothed.values() for _, v in pts]
    if spec.smoothing_window > 1:
        all_v += [v for pts in series.values() for _, v in pts]
    t_lo, t_hi = min(all_t), max(all_t)
    v_lo, v_hi = min(all_v), max(all_v)
    if t_hi == t_lo:
        t_hi = t_lo + 1
    if v_hi == v_lo:
        v_lo -= 1.0
        v_hi += 1.0
    pad = 0.05 * (v_hi - v_lo)
    v_lo -= pad
    v_hi += pad

    plot_w = SVG_WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = SVG_HEIGHT - _MARGIN_T - _MARGIN_B

    def sx(t: float) -> float:
        return _MARGIN_L + (t - t_lo) / (t_hi - t_lo) * plot_w

    def sy(v: float) -> float:
        return _MARGIN_T + (v_hi - v) / (v_hi - v_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" '
        f'height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<text x="{_MARGIN_L:.2f}" y="24" font-family="sans-serif" '
        f'font-size="16" fill="#222">{spec.metric}, {seq_id} '
        f'(moving average, window {spec.smoothing_window})</text>',
    ]
    axis_color = "#444"
    x0, y0 = _MARGIN_L, _MARGIN_T + plot_h
    parts.append(f'<line x1="{x0:.2f}" y1="{_MARGIN_T:.2f}" x2="{x0:.2f}" '
                 f'y2="{y0:.2f}" stroke="{axis_color}" stroke-width="1"/>')
    parts.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x0 + plot_w:.2f}" '
                 f'y2="{y0:.2f}" stroke="{axis_color}" stroke-width="1"/>')
    for tv in _ticks(t_lo, t_hi):
        x = sx(tv)
        parts.append(f'<line x1="{x:.2f}" y1="{y0:.2f}" x2="{x:.2f}" '
                     f'y2="{y0 + 5:.2f}" stroke="{axis_color}" stroke-width="1"/>')
        parts.append(f'<text x="{x:.2f}" y="{y0 + 20:.2f}" font-family="sans-serif" '
                     f'font-size="12" fill="#222" text-anchor="middle">{tv:.6g}</text>')
    for vv in _ticks(v_lo, v_hi):
        y = sy(vv)
        parts.append(f'<line x1="{x0 - 5:.2f}" y1="{y:.2f}" x2="{x0:.2f}" '
                     f'y2="{y:.2f}" stroke="{axis_color}" stroke-width="1"/>')
        parts.append(f'<text x="{x0 - 8:.2f}" y="{y + 4:.2f}" font-family="sans-serif" '
                     f'font-size="12" fill="#222" text-anchor="end">{vv:.6g}</text>')
    parts.append(f'<text x="{x0 + plot_w / 2:.2f}" y="{SVG_HEIGHT - 14}" '
                 f'font-family="sans-serif" font-size="13" fill="#222" '
                 f'text-anchor="middle">frame index t</text>')
    parts.append(f'<text x="18" y="{_MARGIN_T + plot_h / 2:.2f}" '
                 f'font-family="sans-serif" font-size="13" fill="#222" '
                 f'text-anchor="middle" transform="rotate(-90 18 '
                 f'{_MARGIN_T + plot_h / 2:.2f})">{AXIS_LABELS[spec.metric]}</text>')

    for n, method in enumerate(methods):
        color = _PALETTE[n % len(_PALETTE)]
        if spec.smoothing_window > 1:
            raw_pts = [(sx(t), sy(v)) for t, v in series[method]]
            parts.append(_svg_polyline(raw_pts, color, 1.0, opacity=0.3))
        pts = [(sx(t), sy(v)) for t, v in smoothed[method]]
        parts.append(_svg_polyline(pts, color, 2.0))
        ly = _MARGIN_T + 16 + 18 * n
        lx = _MARGIN_L + plot_w - 180
        parts.append(f'<line x1="{lx:.2f}" y1="{ly - 4:.2f}" x2="{lx + 24:.2f}" '
                     f'y2="{ly - 4:.2f}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{lx + 30:.2f}" y="{ly:.2f}" font-family="sans-serif" '
                     f'font-size="13" fill="#222">{method}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_chart(spec: ChartSpec, csv_path) -> Path:
    svg = render_chart(spec, csv_path)
    out = Path(spec.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(svg, encoding="utf-8")
    return out
