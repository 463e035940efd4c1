from __future__ import annotations

from dataclasses import replace
from typing import Iterable, Mapping, Sequence

from ..model import Leg, Order, Task
from .schedule import Schedule


def rechain_downstream(autonomous_schedule: Schedule, orders: Iterable[Order] = (),
                       network=None, config=None) -> dict[str, int]:
    """Last-mile pickup times implied by the actual autonomous schedule.

    The last-mile leg of an order becomes available when its autonomous leg
    ends. First-mile times are upstream and stay as they are. ``orders``
    restricts the result to those orders; by default every autonomous task
    in the schedule is used. ``network`` and ``config`` are accepted for
    symmetry with the other pipeline stages but are not needed because the
    schedule already carries end times.
    """
    tasks = {t.id: t for t in autonomous_schedule.subproblem.tasks}
    wanted = None if not orders else {o.id for o in orders}
    out = {}
    for a in autonomous_schedule.assignments:
        t = tasks[a.task_id]
        if t.leg is not Leg.AUTONOMOUS:
            continue
        if wanted is None or t.order_id in wanted:
            out[t.order_id] = a.end
    return out


def apply_rechain(tasks: Sequence[Task], last_mile_pickups: Mapping[str, int]) -> list[Task]:
    """Return tasks with last-mile pickup times replaced where a new time is known."""
    out = []
    for t in tasks:
        if t.leg is Leg.LAST_MILE and t.order_id in last_mile_pickups:
            t = replace(t, pickup_time=last_mile_pickups[t.order_id])
        out.append(t)
    return out
