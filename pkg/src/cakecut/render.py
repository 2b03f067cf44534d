"""Deterministic SVG output for scenes, traces and cuts.

Only ``circle``, ``line``, ``polyline`` and ``text`` elements are emitted.
Coordinates come from certified float exports and are printed with nine
significant digits and no exponent, so output is byte-stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Iterable, Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

from .constructions import Cut
from .geometry import Point
from .scene import Scene
from .trace import Trace


@dataclass(frozen=True)
class RenderStyle:
    cut_stroke: str = "red"
    cut_width: float = 2.5
    scratch_stroke: str = "#555555"
    scratch_width: float = 1.0
    scratch_dash: str = "1,3"
    cake_fill: str = "#f3e0b5"
    cake_outline: str = "#8a5a2b"
    cake_width: float = 1.5
    labels: bool = True
    font_size: float = 12.0
    width: float = 800.0
    margin: float = 40.0

    def __post_init__(self) -> None:
        if self.width <= 2 * self.margin or self.margin <= 0:
            raise ValueError("canvas width must exceed twice a positive margin")


def fmt(v: float) -> str:
    """Nine significant digits, fixed notation, no trailing zeros."""
    if v == 0:
        return "0"
    d = Decimal(v)
    q = Decimal(1).scaleb(d.adjusted() - 8)
    s = format(d.quantize(q, rounding=ROUND_HALF_EVEN), "f")
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


class _Frame:
    """World-to-canvas map with the y axis flipped."""

    def __init__(self, xs: Sequence[float], ys: Sequence[float], style: RenderStyle) -> None:
        self.xmin, self.ymax = min(xs), max(ys)
        span = max(max(xs) - self.xmin, self.ymax - min(ys), 1e-12)
        self.margin = style.margin
        self.scale = (style.width - 2 * style.margin) / span
        self.width = style.width
        self.height = (self.ymax - min(ys)) * self.scale + 2 * style.margin

    def x(self, x: float) -> str:
        return fmt(self.margin + (x - self.xmin) * self.scale)

    def y(self, y: float) -> str:
        return fmt(self.margin + (self.ymax - y) * self.scale)

    def pt(self, p: Point) -> tuple[str, str]:
        x, y = p.approx()
        return self.x(x), self.y(y)


def _labeled_points(trace: Trace) -> list[tuple[str, Point]]:
    out = []
    for step in trace.steps:
        if not step.label or step.kind in ("cut", "scratch"):
            continue
        pts = [v for v in step.output if isinstance(v, Point)]
        for j, p in enumerate(pts):
            if any(p == q for _, q in out):  # first name wins
                continue
            out.append((step.label if len(pts) == 1 else f"{step.label}{j + 1}", p))
    return out


def render_svg(scene: Scene, trace: Optional[Trace] = None, cuts: Optional[Iterable[Cut]] = None,
               style: Optional[RenderStyle] = None) -> str:
    """SVG text for the scene; cuts default to the trace's cut steps."""
    style = style or RenderStyle()
    scratches = trace.scratches() if trace is not None else []
    if cuts is None:
        segs = [(s.output[0], s.output[1]) for s in trace.cuts()] if trace is not None else []
    else:
        segs = [(c.p, c.q) for c in cuts]
    labels = _labeled_points(trace) if trace is not None and style.labels else []

    xs: list[float] = []
    ys: list[float] = []
    for c in scene.cakes:
        cx, cy = c.center.approx()
        r = c.radius.to_float()
        xs += [cx - r, cx + r]
        ys += [cy - r, cy + r]
    extra = [p for s in scratches for p in s.output] + [p for seg in segs for p in seg]
    extra += [p for _, p in labels]
    for p in extra:
        x, y = p.approx()
        xs.append(x)
        ys.append(y)
    frame = _Frame(xs, ys, style)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        "<!-- cakecut render: y axis flipped (world +y points up the page) -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{fmt(frame.width)}" '
        f'height="{fmt(frame.height)}" viewBox="0 0 {fmt(frame.width)} {fmt(frame.height)}">',
    ]
    for c in sorted(scene.cakes, key=lambda c: c.id):
        cx, cy = frame.pt(c.center)
        out.append(
            f'<circle cx="{cx}" cy="{cy}" r="{fmt(c.radius.to_float() * frame.scale)}" '
            f'fill={quoteattr(style.cake_fill)} stroke={quoteattr(style.cake_outline)} '
            f'stroke-width="{fmt(style.cake_width)}"/>'
        )
        if style.labels:
            out.append(f'<text x="{cx}" y="{cy}" font-size="{fmt(style.font_size)}" '
                       f'text-anchor="middle" fill="#444444">{"+" if c.center_marked else ""}c{c.id}</text>')
    for s in scratches:
        pts = " ".join(",".join(frame.pt(p)) for p in s.output)
        out.append(
            f'<polyline points="{pts}" fill="none" stroke={quoteattr(style.scratch_stroke)} '
            f'stroke-width="{fmt(style.scratch_width)}" stroke-dasharray={quoteattr(style.scratch_dash)}/>'
        )
    for p, q in segs:
        (x1, y1), (x2, y2) = frame.pt(p), frame.pt(q)
        out.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke={quoteattr(style.cut_stroke)} '
            f'stroke-width="{fmt(style.cut_width)}"/>'
        )
    for name, p in labels:
        x, y = frame.pt(p)
        out.append(f'<text x="{x}" y="{y}" font-size="{fmt(style.font_size)}" dx="3" dy="-3">'
                   f"{escape(name)}</text>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
