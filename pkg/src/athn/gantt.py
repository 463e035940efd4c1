"""SVG rendering of truck schedules (Gantt) and single truck routes."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

from .errors import SchemaError
from .io import load_schedule_document
from .model import Instance

LOADED = "#1f5fbf"
EMPTY = "#d62728"
ROW_H = 18
LEFT = 70
TOP = 30
WIDTH = 1000


def _pick(doc: dict, name: str | None) -> dict:
    subs = doc["subproblems"]
    if name is None:
        return subs[0] if subs else {"name": "empty", "truck_count": 0, "assignments": [], "tasks": []}
    for sd in subs:
        if sd["name"] == name:
            return sd
    raise SchemaError(f"no subproblem named {name!r}")


def gantt_svg(doc: dict, subproblem: str | None = None) -> str:
    """One row per truck; blue bars are tasks, red bars are empty relocations."""
    sd = _pick(doc, subproblem)
    service = int(doc.get("service_time", 0))
    rows = int(sd["truck_count"])
    assigns = sorted(sd["assignments"], key=lambda a: (a["truck"], a["position"]))
    span = max([a["end"] for a in assigns] + [1440])
    day = 1440
    span = -(-span // day) * day if span > 2 * day else -(-span // 60) * 60
    scale = WIDTH / span
    height = TOP + ROW_H * rows + 30

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{LEFT + WIDTH + 20}" '
           f'height="{height}" font-family="sans-serif" font-size="10">',
           f'<text x="{LEFT}" y="14" font-size="12">{escape(sd["name"])} schedule</text>',
           f'<line class="axis" x1="{LEFT}" y1="{TOP + ROW_H * rows}" x2="{LEFT + WIDTH}" '
           f'y2="{TOP + ROW_H * rows}" stroke="black"/>',
           f'<line class="axis" x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + ROW_H * rows}" '
           f'stroke="black"/>']
    step = day if span > 2 * day else 60 * max(1, span // 60 // 12)
    for t in range(0, span + 1, step):
        x = LEFT + t * scale
        label = f"day {t // day}" if step >= day else f"{t // 60}h"
        out.append(f'<line class="tick" x1="{x:.2f}" y1="{TOP}" x2="{x:.2f}" '
                   f'y2="{TOP + ROW_H * rows + 4}" stroke="#ccc"/>')
        out.append(f'<text x="{x:.2f}" y="{TOP + ROW_H * rows + 16}" '
                   f'text-anchor="middle">{label}</text>')
    for k in range(rows):
        out.append(f'<text x="{LEFT - 6}" y="{TOP + ROW_H * k + 13}" '
                   f'text-anchor="end">truck {k}</text>')

    prev_end = {}
    for a in assigns:
        k = a["truck"]
        y = TOP + ROW_H * k + 3
        if a.get("relocation") and k in prev_end:
            x0 = LEFT + prev_end[k] * scale
            w = max(a.get("relocation_minutes", 0) * scale, 0.5)
            out.append(f'<rect class="relocation" x="{x0:.2f}" y="{y}" width="{w:.2f}" '
                       f'height="{ROW_H - 6}" fill="{EMPTY}"><title>empty to {escape(a["task"])}'
                       f'</title></rect>')
        x = LEFT + a["start"] * scale
        w = max((a["end"] - a["start"]) * scale, 0.5)
        out.append(f'<rect class="task" x="{x:.2f}" y="{y}" width="{w:.2f}" height="{ROW_H - 6}" '
                   f'fill="{LOADED}"><title>{escape(a["task"])} {a["start"]}-{a["end"]}'
                   f'</title></rect>')
        if service:
            for edge in (a["start"] + service, a["end"] - service):
                ex = LEFT + edge * scale
                out.append(f'<line class="phase" x1="{ex:.2f}" y1="{y}" x2="{ex:.2f}" '
                           f'y2="{y + ROW_H - 6}" stroke="white" stroke-width="0.5"/>')
        prev_end[k] = a["end"]
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_gantt(schedule_path, out_path, subproblem: str | None = None) -> str:
    doc = load_schedule_document(Path(schedule_path).read_text())
    svg = gantt_svg(doc, subproblem)
    Path(out_path).write_text(svg)
    return svg


def route_svg(doc: dict, instance: Instance, truck: int, subproblem: str | None = None) -> str:
    """Schematic map of one truck's route: blue loaded moves, red empty moves."""
    sd = _pick(doc, subproblem)
    tasks = {t["id"]: t for t in sd["tasks"]}
    seq = sorted((a for a in sd["assignments"] if a["truck"] == truck), key=lambda a: a["position"])
    locs = instance.network.locations
    xs = [loc.x for loc in locs] or [0.0]
    ys = [loc.y for loc in locs] or [0.0]
    x0, y0 = min(xs), min(ys)
    span = max(max(xs) - x0, max(ys) - y0, 1.0)
    size = 600

    def pt(i):
        return 20 + (locs[i].x - x0) / span * size, 20 + size - (locs[i].y - y0) / span * size

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 40}" height="{size + 40}">',
           '<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="6" refY="3" '
           'orient="auto"><path d="M0,0 L6,3 L0,6 z"/></marker></defs>']
    for h in instance.network.hubs:
        x, y = pt(h)
        out.append(f'<rect class="hub" x="{x - 3:.1f}" y="{y - 3:.1f}" width="6" height="6" fill="#555"/>')
    prev = None
    for a in seq:
        t = tasks[a["task"]]
        if prev is not None and prev["destination"] != t["origin"]:
            (ax, ay), (bx, by) = pt(prev["destination"]), pt(t["origin"])
            out.append(f'<line class="empty" x1="{ax:.1f}" y1="{ay:.1f}" x2="{bx:.1f}" y2="{by:.1f}" '
                       f'stroke="{EMPTY}" stroke-width="2" marker-end="url(#arrow)"/>')
        (ax, ay), (bx, by) = pt(t["origin"]), pt(t["destination"])
        out.append(f'<line class="loaded" x1="{ax:.1f}" y1="{ay:.1f}" x2="{bx:.1f}" y2="{by:.1f}" '
                   f'stroke="{LOADED}" stroke-width="2" marker-end="url(#arrow)"/>')
        prev = t
    out.append("</svg>")
    return "\n".join(out) + "\n"
