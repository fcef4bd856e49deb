# infrastructure/svg_chart.py

from __future__ import annotations

import logging
import math
from typing import List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

logger = logging.getLogger(__name__)

WIDTH = 720
HEIGHT = 440
MARGIN = 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")

Series = Tuple[str, Sequence[float], bool]  # (légende, valeurs par t, pointillés)


def _segments(values: Sequence[float]) -> List[List[Tuple[int, float]]]:
    """Découpe la série en segments de valeurs strictement positives et finies."""
    segments: List[List[Tuple[int, float]]] = []
    current: List[Tuple[int, float]] = []
    for t, v in enumerate(values):
        if v is not None and math.isfinite(v) and v > 0.0:
            current.append((t, math.log10(v)))
        elif current:
            segments.append(current)
            current = []
    if current:
        segments.append(current)
    return segments


def render_log_chart(series: Sequence[Series], title: str) -> Optional[str]:
    """
    Courbes en échelle logarithmique (axe y) contre t, tracées en <polyline>.
    Renvoie None s'il n'y a rien à tracer.
    """
    all_segments = [(label, _segments(values), dashed) for label, values, dashed in series]
    logs = [y for _, segs, _ in all_segments for seg in segs for _, y in seg]
    if not logs:
        logger.debug("render_log_chart: aucune valeur positive, pas de graphique.")
        return None

    t_max = max(len(values) for _, values, _ in series) - 1
    y_lo = math.floor(min(logs))
    y_hi = math.ceil(max(logs))
    if y_hi == y_lo:
        y_hi += 1
    x_span = max(t_max, 1)
    plot_w = WIDTH - 2 * MARGIN
    plot_h = HEIGHT - 2 * MARGIN

    def sx(t: int) -> float:
        return MARGIN + plot_w * t / x_span

    def sy(y: float) -> float:
        return HEIGHT - MARGIN - plot_h * (y - y_lo) / (y_hi - y_lo)

    out: List[str] = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{MARGIN}" y1="{HEIGHT - MARGIN}" x2="{WIDTH - MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
        f'<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{HEIGHT - MARGIN}" stroke="black"/>',
    ]

    for decade in range(y_lo, y_hi + 1):
        y = sy(decade)
        out.append(
            f'<line x1="{MARGIN}" y1="{y:.2f}" x2="{WIDTH - MARGIN}" y2="{y:.2f}" '
            'stroke="#dddddd" stroke-width="0.5"/>'
        )
        out.append(
            f'<text x="{MARGIN - 6}" y="{y + 4:.2f}" text-anchor="end" font-size="10">1e{decade}</text>'
        )
    for t in sorted({0, t_max // 2, t_max}):
        out.append(
            f'<text x="{sx(t):.2f}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle" font-size="10">{t}</text>'
        )
    out.append(
        f'<text x="{WIDTH / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle" font-size="11">t</text>'
    )

    for k, (label, segments, dashed) in enumerate(all_segments):
        color = PALETTE[k % len(PALETTE)]
        style = ' stroke-dasharray="6,4"' if dashed else ""
        for seg in segments:
            if len(seg) == 1:
                t, y = seg[0]
                out.append(f'<circle cx="{sx(t):.2f}" cy="{sy(y):.2f}" r="2" fill="{color}"/>')
                continue
            points = " ".join(f"{sx(t):.2f},{sy(y):.2f}" for t, y in seg)
            out.append(
                f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1.5"{style}/>'
            )
        ly = MARGIN + 14 * k
        out.append(
            f'<line x1="{WIDTH - MARGIN - 150}" y1="{ly}" x2="{WIDTH - MARGIN - 130}" y2="{ly}" '
            f'stroke="{color}" stroke-width="1.5"{style}/>'
        )
        out.append(
            f'<text x="{WIDTH - MARGIN - 125}" y="{ly + 4}" font-size="10">{escape(label)}</text>'
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"
