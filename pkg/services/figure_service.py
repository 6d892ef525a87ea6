"""
SVG scatter of certified bounds against the exact gap, rendered from a Jinja2 template.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from jinja2 import Environment, FileSystemLoader, select_autoescape

from config import FIGURE_VLINE, TEMPLATE_DIR
from repository.scan_repository import ScanRecord
from utils.logger import get_logger

logger = get_logger(__name__)

SIZE = 640
DATA_MAX = 0.55
TEMPLATE_NAME = "scatter.svg.j2"

_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 20, 20, 60


@dataclass(frozen=True)
class Series:
    key: str
    css: str
    label: str
    color: str
    shape: str


# Drawing order: lower bounds from V_q first, then lambda_minus, then lambda_plus.
SERIES: Sequence[Series] = (
    Series("minus_q", "series-minus-q", "(λ₋(v,q), gap(v))", "#1f77b4", "circle"),
    Series("minus", "series-minus", "(λ₋(v), gap(v))", "#f2c500", "triangle"),
    Series("plus", "series-plus", "(λ₊(v), gap(v))", "#2ca02c", "square"),
)


class _Frame:
    def __init__(self):
        self.left = _LEFT
        self.top = _TOP
        self.width = SIZE - _LEFT - _RIGHT
        self.height = SIZE - _TOP - _BOTTOM
        self.bottom = self.top + self.height

    def x(self, value: float) -> float:
        value = min(max(value, 0.0), DATA_MAX)
        return round(self.left + value / DATA_MAX * self.width, 2)

    def y(self, value: float) -> float:
        value = min(max(value, 0.0), DATA_MAX)
        return round(self.bottom - value / DATA_MAX * self.height, 2)


_env: Optional[Environment] = None


def _environment() -> Environment:
    global _env
    if _env is None:
        _env = Environment(
            loader=FileSystemLoader(TEMPLATE_DIR),
            autoescape=select_autoescape(enabled_extensions=("svg", "j2"), default=True),
        )
    return _env


def series_points(records: Sequence[ScanRecord], frame: _Frame) -> List[dict]:
    out = []
    for s in SERIES:
        points = [
            {"x": frame.x(getattr(r, f"lambda_{s.key}_cert")), "y": frame.y(r.gap)}
            for r in records
            if r.certified(s.key)
        ]
        out.append({"css": s.css, "label": s.label, "color": s.color, "shape": s.shape, "points": points})
    return out


def render_figure(records: Sequence[ScanRecord], vline: Optional[float] = FIGURE_VLINE) -> str:
    """Only certified values are drawn; each series skips rows whose status is anything else."""
    frame = _Frame()
    ticks = [
        {"label": f"{t / 10:.1f}", "x": frame.x(t / 10), "y": frame.y(t / 10)}
        for t in range(0, 6)
    ]
    series = series_points(records, frame)
    svg = _environment().get_template(TEMPLATE_NAME).render(
        size=SIZE,
        title="certified bounds against the gap of loneliness",
        frame=frame,
        ticks=ticks,
        x_label="certified bound",
        y_label="gap(v)",
        diagonal={"x1": frame.x(0.0), "y1": frame.y(0.0), "x2": frame.x(DATA_MAX), "y2": frame.y(DATA_MAX)},
        vline=frame.x(vline) if vline is not None else None,
        series=series,
    )
    logger.debug(
        "figure: %s",
        ", ".join(f"{s['css']}={len(s['points'])}" for s in series),
    )
    return svg


def marker_counts(records: Sequence[ScanRecord]) -> Dict[str, int]:
    return {s.css: sum(1 for r in records if r.certified(s.key)) for s in SERIES}


def write_figure(path: str, records: Sequence[ScanRecord], vline: Optional[float] = FIGURE_VLINE) -> Dict[str, int]:
    svg = render_figure(records, vline)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(svg)
    counts = marker_counts(records)
    logger.info("wrote %s (%s)", path, ", ".join(f"{k}: {v}" for k, v in counts.items()))
    return counts
