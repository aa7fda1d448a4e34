"""Static SVG output: cycle maps and sweep line charts."""
from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .planner import CoveragePlan
from .scenario import Scenario, subarea_center
from .sweep import SweepResult, format_value

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def plan_svg(s: Scenario, plan: CoveragePlan, size: int = 480) -> str:
    """Grid with the station square, one circle per subarea and one path per cycle."""
    pad = 30
    sx = size / s.area_width_m
    sy = size / s.area_height_m

    def px(idx: int) -> tuple[float, float]:
        x, y = subarea_center(s, idx)
        # origin corner at the bottom left
        return pad + x * sx, pad + size - y * sy

    cw, ch = size / s.grid_cols, size / s.grid_rows
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * pad}" height="{size + 2 * pad}">',
           '<g stroke="#cccccc" fill="none">']
    for r in range(s.grid_rows):
        for c in range(s.grid_cols):
            out.append(f'<rect x="{pad + c * cw:.2f}" y="{pad + size - (r + 1) * ch:.2f}" '
                       f'width="{cw:.2f}" height="{ch:.2f}"/>')
    out.append("</g>")
    sxp, syp = px(s.charging_station)
    out.append(f'<rect x="{sxp - 7:.2f}" y="{syp - 7:.2f}" width="14" height="14" fill="black"><title>station</title></rect>')
    for ci, cyc in enumerate(plan.cycles):
        pts = [px(s.charging_station)] + [px(j) for j in cyc.subareas] + [px(s.charging_station)]
        d = "M " + " L ".join(f"{x:.2f} {y:.2f}" for x, y in pts)
        color = PALETTE[ci % len(PALETTE)]
        out.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="2"><title>cycle {ci}</title></path>')
    for j in s.coverage_subareas:
        x, y = px(j)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="white" stroke="black"><title>{j}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def sweep_svg(result: SweepResult, width: int = 560, height: int = 360) -> str:
    """Line chart of additional UAVs against the swept value, one polyline per method."""
    if not result.rows:
        raise ValueError("empty sweep")
    param = result.rows[0].param
    values = []
    for r in result.rows:
        if r.value not in values:
            values.append(r.value)
    methods = []
    for r in result.rows:
        if r.method not in methods:
            methods.append(r.method)
    ys = [r.additional_uavs for r in result.rows if r.additional_uavs is not None] or [1]
    y_max = max(ys)
    left, right, top, bottom = 60, 20, 20, 50
    pw, ph = width - left - right, height - top - bottom

    def xpos(i: int) -> float:
        return left + (pw * i / (len(values) - 1) if len(values) > 1 else pw / 2)

    def ypos(v) -> float:
        return top + ph - ph * float(Fraction(v)) / y_max

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
           f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>']
    for i, v in enumerate(values):
        out.append(f'<text x="{xpos(i):.1f}" y="{top + ph + 16}" font-size="10" text-anchor="middle">'
                   f'{escape(format_value(param, v))}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{height - 8}" font-size="12" text-anchor="middle">{escape(param)}</text>')
    out.append(f'<text x="14" y="{top + ph / 2}" font-size="12" transform="rotate(-90 14 {top + ph / 2})" '
               f'text-anchor="middle">additional UAVs</text>')
    for tick in range(0, y_max + 1, max(1, y_max // 5)):
        out.append(f'<text x="{left - 6}" y="{ypos(tick) + 4:.1f}" font-size="10" text-anchor="end">{tick}</text>')
    for mi, method in enumerate(methods):
        series = {r.value: r.additional_uavs for r in result.rows if r.method == method}
        pts = [(xpos(i), ypos(series[v])) for i, v in enumerate(values) if series.get(v) is not None]
        color = PALETTE[mi % len(PALETTE)]
        coords = " ".join(f"{x:.1f},{y:.1f}" for x, y in pts)
        out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="2">'
                   f'<title>{escape(method)}</title></polyline>')
        out.append(f'<text x="{left + pw - 4}" y="{top + 14 * (mi + 1)}" font-size="11" fill="{color}" '
                   f'text-anchor="end">{escape(method.upper())}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
