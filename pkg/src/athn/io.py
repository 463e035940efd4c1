"""
JSON documents for instances and schedules.

Both carry a ``schema_version``. Writers are deterministic, so a document
that is read and written again comes back byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .errors import AthnError, SchemaError
from .model import (
    Config,
    Fleet,
    Instance,
    Leg,
    Location,
    LocationKind,
    Network,
    Order,
    Subproblem,
    SubproblemKind,
    Task,
)
from .scheduler import Schedule, ScheduledTask, Status

SCHEMA_VERSION = 1


def _frac_out(x: Fraction):
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else str(x)


def _frac_in(v, where: str) -> Fraction:
    try:
        return Fraction(str(v))
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"{where}: not a number: {v!r}") from None


def _dumps(doc: dict, matrix_keys: Sequence[str] = ()) -> str:
    """Indented JSON with each matrix row kept on a single line."""
    placeholders = {}
    body = {}
    for key, value in doc.items():
        if key in matrix_keys and value is not None:
            token = f"@@{key}@@"
            rows = ",\n".join("    " + json.dumps(list(row), separators=(",", ":")) for row in value)
            placeholders[f'"{token}"'] = "[\n" + rows + "\n  ]" if value else "[]"
            body[key] = token
        else:
            body[key] = value
    text = json.dumps(body, indent=2)
    for token, rows in placeholders.items():
        text = text.replace(token, rows)
    return text + "\n"


def _loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    version = doc.get("schema_version")
    if version is None:
        raise SchemaError("missing field schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version}")
    return doc


def _field(obj: dict, name: str, where: str, kind=None):
    if name not in obj:
        raise SchemaError(f"{where}: missing field {name}")
    value = obj[name]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"{where}.{name}: expected {getattr(kind, '__name__', kind)}")
    return value


def config_to_dict(cfg: Config) -> dict:
    return {
        "service_time": cfg.service_time,
        "flexibility": cfg.flexibility,
        "alpha": _frac_out(cfg.alpha),
        "cost_per_mile": cfg.cost_per_mile,
        "horizon": cfg.horizon,
        "fl_empty_ratio": _frac_out(cfg.fl_empty_ratio),
    }


def config_from_dict(d: dict) -> Config:
    try:
        return Config(
            service_time=int(_field(d, "service_time", "config")),
            flexibility=int(_field(d, "flexibility", "config")),
            alpha=_frac_in(_field(d, "alpha", "config"), "config.alpha"),
            cost_per_mile=int(_field(d, "cost_per_mile", "config")),
            horizon=int(_field(d, "horizon", "config")),
            fl_empty_ratio=_frac_in(d.get("fl_empty_ratio", "1/4"), "config.fl_empty_ratio"),
        )
    except AthnError as e:
        raise SchemaError(f"config: {e}") from None


def instance_to_json(inst: Instance) -> str:
    net = inst.network
    doc = {
        "schema_version": SCHEMA_VERSION,
        "config": config_to_dict(inst.config),
        "locations": [{"id": loc.id, "kind": loc.kind.value, "label": loc.label,
                       "x": loc.x, "y": loc.y} for loc in net.locations],
        "travel_time": net.travel_time.tolist(),
        "travel_cost": net.travel_cost.tolist(),
        "distance": None if net.distance is None else net.distance.tolist(),
        "orders": [{"id": o.id, "origin": o.origin, "destination": o.destination,
                    "pickup_time": o.pickup_time} for o in inst.orders],
        "fleet": {"autonomous": inst.fleet.autonomous_count,
                  "hubs": {str(h): c for h, c in sorted(inst.fleet.hub_counts.items())}},
    }
    return _dumps(doc, ("travel_time", "travel_cost", "distance"))


def instance_from_json(text: str) -> Instance:
    """Parse an instance document.

    Raises:
        SchemaError: malformed JSON, missing fields, or dangling location references.
    """
    doc = _loads(text)
    cfg = config_from_dict(_field(doc, "config", "instance", dict))
    locations = []
    for i, d in enumerate(_field(doc, "locations", "instance", list)):
        where = f"locations[{i}]"
        try:
            kind = LocationKind(_field(d, "kind", where))
        except ValueError:
            raise SchemaError(f"{where}.kind: expected 'hub' or 'customer'") from None
        locations.append(Location(int(_field(d, "id", where)), kind, str(d.get("label", "")),
                                  float(d.get("x", 0.0)), float(d.get("y", 0.0))))
    try:
        distance = doc.get("distance")
        net = Network(tuple(locations), np.array(_field(doc, "travel_time", "instance", list)),
                      np.array(_field(doc, "travel_cost", "instance", list)),
                      None if distance is None else np.array(distance))
    except (AthnError, ValueError) as e:
        raise SchemaError(f"network: {e}") from None
    orders = []
    for i, d in enumerate(_field(doc, "orders", "instance", list)):
        where = f"orders[{i}]"
        try:
            orders.append(Order(str(_field(d, "id", where)), int(_field(d, "origin", where)),
                                int(_field(d, "destination", where)),
                                int(_field(d, "pickup_time", where))))
        except AthnError as e:
            raise SchemaError(f"{where}: {e}") from None
    fd = _field(doc, "fleet", "instance", dict)
    try:
        fleet = Fleet(int(_field(fd, "autonomous", "fleet")),
                      {int(h): int(c) for h, c in _field(fd, "hubs", "fleet", dict).items()})
        return Instance(net, tuple(orders), fleet, cfg)
    except (AthnError, ValueError) as e:
        raise SchemaError(str(e)) from None


def _task_to_dict(t: Task) -> dict:
    return {"id": t.id, "order_id": t.order_id, "leg": t.leg.value, "origin": t.origin,
            "destination": t.destination, "pickup_time": t.pickup_time}


def _task_from_dict(d: dict, where: str) -> Task:
    try:
        leg = Leg(_field(d, "leg", where))
    except ValueError:
        raise SchemaError(f"{where}.leg: unknown leg {d['leg']!r}") from None
    return Task(str(_field(d, "id", where)), str(_field(d, "order_id", where)), leg,
                int(_field(d, "origin", where)), int(_field(d, "destination", where)),
                int(_field(d, "pickup_time", where)))


def schedules_to_json(schedules: Sequence[Schedule]) -> str:
    """Schedule document; each assignment also records the relocation leading into it."""
    subs = []
    service_time = 0
    for s in schedules:
        sub = s.subproblem
        net = sub.network
        service_time = sub.config.service_time
        tasks = {t.id: t for t in sub.tasks}
        rows = []
        for route in s.routes():
            prev = None
            for a in route:
                t = tasks[a.task_id]
                if prev is None:
                    reloc_min = reloc_mi = 0
                    reloc = False
                else:
                    reloc_min = net.travel_minutes(prev.destination, t.origin)
                    reloc_mi = _frac_out(net.miles(prev.destination, t.origin, sub.config.cost_per_mile))
                    reloc = prev.destination != t.origin
                rows.append({"task": a.task_id, "truck": a.truck, "position": a.position,
                             "start": a.start, "end": a.end, "relocation": reloc,
                             "relocation_minutes": reloc_min, "relocation_miles": reloc_mi})
                prev = t
        subs.append({
            "name": sub.name,
            "kind": sub.kind.value,
            "hub": sub.hub,
            "truck_class": sub.truck_class.value,
            "truck_count": sub.truck_count,
            "status": s.status.value,
            "blocking_task": s.blocking_task,
            "empty_cost": s.empty_cost,
            "empty_miles": _frac_out(s.empty_miles),
            "tasks": [_task_to_dict(t) for t in sub.tasks],
            "assignments": rows,
        })
    doc = {"schema_version": SCHEMA_VERSION, "service_time": service_time, "subproblems": subs}
    return json.dumps(doc, indent=1) + "\n"


def load_schedule_document(text: str) -> dict:
    """Parse and structurally check a schedule document without an instance."""
    doc = _loads(text)
    subs = _field(doc, "subproblems", "schedule", list)
    for i, sd in enumerate(subs):
        where = f"subproblems[{i}]"
        count = int(_field(sd, "truck_count", where))
        ids = set()
        for j, td in enumerate(_field(sd, "tasks", where, list)):
            ids.add(_task_from_dict(td, f"{where}.tasks[{j}]").id)
        for j, ad in enumerate(_field(sd, "assignments", where, list)):
            aw = f"{where}.assignments[{j}]"
            for key in ("task", "truck", "position", "start", "end"):
                _field(ad, key, aw)
            if ad["task"] not in ids:
                raise SchemaError(f"{aw}: unknown task {ad['task']!r}")
            if not 0 <= int(ad["truck"]) < count:
                raise SchemaError(f"{aw}: truck {ad['truck']} outside 0..{count - 1}")
    return doc


def schedules_from_json(text: str, instance: Instance) -> list[Schedule]:
    """Rebuild Schedule objects against the instance they were computed for."""
    doc = load_schedule_document(text)
    out = []
    for i, sd in enumerate(doc["subproblems"]):
        where = f"subproblems[{i}]"
        try:
            kind = SubproblemKind(sd["kind"])
            status = Status(sd["status"])
        except (KeyError, ValueError):
            raise SchemaError(f"{where}: bad kind or status") from None
        tasks = tuple(_task_from_dict(td, where) for td in sd["tasks"])
        sub = Subproblem(kind, tasks, int(sd["truck_count"]), instance.network, instance.config,
                         sd.get("hub"))
        assignments = tuple(ScheduledTask(a["task"], int(a["truck"]), int(a["position"]),
                                          int(a["start"]), int(a["end"])) for a in sd["assignments"])
        out.append(Schedule(sub, assignments, int(_field(sd, "empty_cost", where)),
                            _frac_in(_field(sd, "empty_miles", where), where), status,
                            sd.get("blocking_task")))
    return out


def dump_any(obj: Any) -> str:
    return json.dumps(obj, indent=2, default=_frac_out) + "\n"
