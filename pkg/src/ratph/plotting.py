"""Axonometric SVG plots of sampled space curves.

Projection is a fixed axonometric map

    u = x - 0.45 z,   v = y - 0.35 z

(right-handed, z receding), fitted to a fixed-size canvas with margins.
Endpoint tangent arrows are drawn scaled by ``arrow_scale`` (the figures we
reproduce scale them to 10-20% of actual size).  The file is built with
ElementTree, so it is well-formed XML by construction.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from typing import Optional, Sequence

WIDTH = 640
HEIGHT = 480
MARGIN = 40
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _project(x: float, y: float, z: float) -> tuple:
    return (x - 0.45 * z, y - 0.35 * z)


class _Frame:
    """Affine map from projected coordinates to the SVG canvas (y flipped)."""

    def __init__(self, points):
        us = [p[0] for p in points]
        vs = [p[1] for p in points]
        lo_u, hi_u = min(us), max(us)
        lo_v, hi_v = min(vs), max(vs)
        span_u = max(hi_u - lo_u, 1e-9)
        span_v = max(hi_v - lo_v, 1e-9)
        scale = min((WIDTH - 2 * MARGIN) / span_u, (HEIGHT - 2 * MARGIN) / span_v)
        self.scale = scale
        self.cu = 0.5 * (lo_u + hi_u)
        self.cv = 0.5 * (lo_v + hi_v)

    def map(self, p) -> tuple:
        return (
            WIDTH / 2 + (p[0] - self.cu) * self.scale,
            HEIGHT / 2 - (p[1] - self.cv) * self.scale,
        )


def _fmt(x: float) -> str:
    return "%.2f" % x


def emit_plot(
    path: str,
    curves: Sequence,
    arrows: Sequence = (),
    arrow_scale: float = 0.2,
    title: Optional[str] = None,
):
    """Write an SVG with one polyline per (label, samples) pair in ``curves``.

    ``samples`` rows are (t, x, y, z, ...); ``arrows`` holds (base, vector)
    pairs in curve coordinates.
    """
    if not curves:
        raise ValueError("nothing to plot")
    projected = []
    all_pts = []
    for label, rows in curves:
        pts = [_project(float(r[1]), float(r[2]), float(r[3])) for r in rows]
        projected.append((label, pts))
        all_pts.extend(pts)
    arrow_segs = []
    for base, vec in arrows:
        tip = tuple(b + arrow_scale * v for b, v in zip(base, vec))
        p0 = _project(*[float(c) for c in base])
        p1 = _project(*[float(c) for c in tip])
        arrow_segs.append((p0, p1))
        all_pts.extend([p0, p1])
    frame = _Frame(all_pts)

    svg = ET.Element(
        "svg",
        xmlns="http://www.w3.org/2000/svg",
        width=str(WIDTH),
        height=str(HEIGHT),
        viewBox="0 0 %d %d" % (WIDTH, HEIGHT),
    )
    ET.SubElement(svg, "rect", x="0", y="0", width=str(WIDTH), height=str(HEIGHT), fill="white")
    if title:
        el = ET.SubElement(
            svg, "text", x=str(WIDTH / 2), y=str(MARGIN / 2 + 6),
            fill="#333", style="font:14px sans-serif", attrib={"text-anchor": "middle"},
        )
        el.text = title
    for k, (label, pts) in enumerate(projected):
        color = PALETTE[k % len(PALETTE)]
        mapped = [frame.map(p) for p in pts]
        if len(mapped) == 1:
            x, y = mapped[0]
            ET.SubElement(svg, "circle", cx=_fmt(x), cy=_fmt(y), r="3", fill=color)
        else:
            ET.SubElement(
                svg,
                "polyline",
                points=" ".join("%s,%s" % (_fmt(x), _fmt(y)) for x, y in mapped),
                fill="none",
                stroke=color,
                attrib={"stroke-width": "1.5"},
            )
        lbl = ET.SubElement(
            svg, "text", x=str(WIDTH - MARGIN - 150), y=str(MARGIN + 16 * k),
            fill=color, style="font:12px sans-serif",
        )
        lbl.text = str(label)
    for p0, p1 in arrow_segs:
        a = frame.map(p0)
        b = frame.map(p1)
        ET.SubElement(
            svg, "line", x1=_fmt(a[0]), y1=_fmt(a[1]), x2=_fmt(b[0]), y2=_fmt(b[1]),
            stroke="#555", attrib={"stroke-width": "1.2"},
        )
        # arrowhead: two short back-strokes at the tip
        dx, dy = b[0] - a[0], b[1] - a[1]
        norm = max((dx * dx + dy * dy) ** 0.5, 1e-9)
        ux, uy = dx / norm, dy / norm
        px, py = -uy, ux
        size = min(8.0, 0.3 * norm)
        for s in (1.0, -1.0):
            ET.SubElement(
                svg, "line",
                x1=_fmt(b[0]), y1=_fmt(b[1]),
                x2=_fmt(b[0] - size * ux + s * 0.5 * size * px),
                y2=_fmt(b[1] - size * uy + s * 0.5 * size * py),
                stroke="#555", attrib={"stroke-width": "1.2"},
            )
    tree = ET.ElementTree(svg)
    ET.indent(tree)
    tree.write(path, encoding="unicode", xml_declaration=True)
