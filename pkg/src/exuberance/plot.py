"""Standalone SVG chart of a BSADF sequence against its critical values."""
from __future__ import annotations

import math
import xml.etree.ElementTree as ET

import numpy as np

from .errors import LengthMismatch

WIDTH, HEIGHT = 720, 320
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 56, 16, 28, 44
SVG_NS = "http://www.w3.org/2000/svg"


def _ticks(lo, hi, n=5):
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=raw)
    first = math.ceil(lo / step) * step
    return [first + i * step for i in range(int((hi - first) / step) + 1)]


def render_plot(bsadf, cv, episodes, dates, title="BSADF"):
    """Return an SVG document as a string.

    ``dates`` labels the BSADF endpoints (one per statistic).  Degenerate
    endpoints are left out of the statistic polyline.
    """
    stats = np.asarray(bsadf.stats if hasattr(bsadf, "stats") else bsadf, dtype=np.float64)
    crit = np.asarray(cv.values if hasattr(cv, "values") else cv, dtype=np.float64)
    n = stats.shape[0]
    if crit.shape[0] != n or len(dates) != n:
        raise LengthMismatch(f"{n} statistics, {crit.shape[0]} critical values, {len(dates)} dates")

    finite = np.concatenate([stats[np.isfinite(stats)], crit[np.isfinite(crit)]])
    ymin, ymax = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    pad = 0.05 * (ymax - ymin or 1.0)
    ymin, ymax = ymin - pad, ymax + pad

    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(i):
        return MARGIN_L + (pw * i / (n - 1) if n > 1 else pw / 2)

    def py(v):
        return MARGIN_T + ph * (ymax - v) / (ymax - ymin)

    svg = ET.Element("svg", {
        "xmlns": SVG_NS, "width": str(WIDTH), "height": str(HEIGHT),
        "viewBox": f"0 0 {WIDTH} {HEIGHT}", "font-family": "sans-serif", "font-size": "11",
    })
    ET.SubElement(svg, "title").text = title
    ET.SubElement(svg, "rect", {"x": "0", "y": "0", "width": str(WIDTH), "height": str(HEIGHT), "fill": "white"})

    half = pw / (2 * (n - 1)) if n > 1 else pw / 2
    for ep in episodes:
        x0 = max(MARGIN_L, px(ep.start_index) - half)
        x1 = min(MARGIN_L + pw, px(ep.end_index) + half)
        ET.SubElement(svg, "rect", {
            "class": "episode", "x": f"{x0:.2f}", "y": str(MARGIN_T),
            "width": f"{x1 - x0:.2f}", "height": str(ph), "fill": "#f4a582", "fill-opacity": "0.45",
        })

    axes = ET.SubElement(svg, "g", {"stroke": "#444", "stroke-width": "1"})
    ET.SubElement(axes, "line", {"x1": str(MARGIN_L), "y1": str(MARGIN_T + ph),
                                 "x2": str(MARGIN_L + pw), "y2": str(MARGIN_T + ph)})
    ET.SubElement(axes, "line", {"x1": str(MARGIN_L), "y1": str(MARGIN_T),
                                 "x2": str(MARGIN_L), "y2": str(MARGIN_T + ph)})
    labels = ET.SubElement(svg, "g", {"class": "labels", "fill": "#222"})
    for v in _ticks(ymin, ymax):
        y = py(v)
        ET.SubElement(axes, "line", {"x1": str(MARGIN_L - 4), "y1": f"{y:.2f}", "x2": str(MARGIN_L), "y2": f"{y:.2f}"})
        ET.SubElement(labels, "text", {"x": str(MARGIN_L - 6), "y": f"{y + 4:.2f}",
                                       "text-anchor": "end"}).text = f"{v:g}"
    n_xt = min(n, 6)
    for i in sorted({round(j * (n - 1) / max(n_xt - 1, 1)) for j in range(n_xt)}):
        x = px(i)
        ET.SubElement(axes, "line", {"x1": f"{x:.2f}", "y1": str(MARGIN_T + ph),
                                     "x2": f"{x:.2f}", "y2": str(MARGIN_T + ph + 4)})
        ET.SubElement(labels, "text", {"class": "date", "x": f"{x:.2f}", "y": str(MARGIN_T + ph + 18),
                                       "text-anchor": "middle"}).text = str(dates[i])

    def points(vals):
        return " ".join(f"{px(i):.2f},{py(v):.2f}" for i, v in enumerate(vals) if math.isfinite(v))

    ET.SubElement(svg, "polyline", {"class": "bsadf", "points": points(stats), "fill": "none",
                                    "stroke": "#2166ac", "stroke-width": "1.5"})
    ET.SubElement(svg, "polyline", {"class": "critical", "points": points(crit), "fill": "none",
                                    "stroke": "#b2182b", "stroke-width": "1.2", "stroke-dasharray": "5,3"})
    ET.SubElement(labels, "text", {"x": str(MARGIN_L), "y": "16"}).text = title
    level = getattr(cv, "level", None)
    legend = "BSADF (solid) vs critical value" + (f" at {level:g}" if level is not None else "") + " (dashed)"
    ET.SubElement(labels, "text", {"x": str(MARGIN_L + pw), "y": "16", "text-anchor": "end"}).text = legend
    return ET.tostring(svg, encoding="unicode", xml_declaration=True) + "\n"
