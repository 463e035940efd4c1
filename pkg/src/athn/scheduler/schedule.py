"""Schedule types, the shared routing primitives, and the independent validator."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from ..model import Subproblem


class Status(str, Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    TIMED_OUT = "timed_out"


@dataclass(frozen=True)
class ScheduledTask:
    task_id: str
    truck: int
    position: int
    start: int
    end: int


@dataclass(frozen=True, eq=False)
class Schedule:
    subproblem: Subproblem
    assignments: tuple[ScheduledTask, ...]
    empty_cost: int
    empty_miles: Fraction
    status: Status
    blocking_task: str | None = None

    @property
    def feasible(self) -> bool:
        return self.status in (Status.OPTIMAL, Status.FEASIBLE) or (
            self.status is Status.TIMED_OUT and bool(self.assignments or not self.subproblem.tasks))

    def routes(self) -> list[list[ScheduledTask]]:
        """Assignments grouped per truck, in sequence order."""
        out = [[] for _ in range(self.subproblem.truck_count)]
        for a in self.assignments:
            out[a.truck].append(a)
        for r in out:
            r.sort(key=lambda a: a.position)
        return out


class IndexedSubproblem:
    """Flat, index-based view of a subproblem used by the solvers."""

    def __init__(self, sub: Subproblem):
        self.sub = sub
        net, cfg = sub.network, sub.config
        self.n = len(sub.tasks)
        self.k = sub.truck_count
        self.orig = [t.origin for t in sub.tasks]
        self.dest = [t.destination for t in sub.tasks]
        self.dur = [t.duration(net, cfg.service_time) for t in sub.tasks]
        self.lo = [max(0, t.pickup_time - cfg.flexibility) for t in sub.tasks]
        self.hi = [t.pickup_time + cfg.flexibility for t in sub.tasks]
        tt = net.travel_time.tolist()
        cc = net.travel_cost.tolist()
        # setup time / cost from the end of task i to the start of task j
        self.setup = [[tt[self.dest[i]][self.orig[j]] for j in range(self.n)] for i in range(self.n)]
        self.cost = [[cc[self.dest[i]][self.orig[j]] for j in range(self.n)] for i in range(self.n)]

    def route_starts(self, route: Sequence[int]) -> list[int] | None:
        """Earliest start times along a route, or None if some window is missed."""
        starts = []
        prev = -1
        t_free = 0
        for j in route:
            s = self.lo[j] if prev < 0 else max(self.lo[j], t_free + self.setup[prev][j])
            if s > self.hi[j]:
                return None
            starts.append(s)
            t_free = s + self.dur[j]
            prev = j
        return starts

    def route_cost(self, route: Sequence[int]) -> int:
        return sum(self.cost[a][b] for a, b in zip(route, route[1:]))


def build_schedule(sub: Subproblem, routes: Sequence[Sequence[int]], status: Status,
                   inst: IndexedSubproblem | None = None) -> Schedule:
    """Materialize per-truck index routes into a Schedule with earliest start times."""
    inst = inst or IndexedSubproblem(sub)
    net, cfg = sub.network, sub.config
    assignments = []
    cost = 0
    miles = Fraction(0)
    for k, route in enumerate(routes):
        starts = inst.route_starts(route)
        if starts is None:
            raise ValueError(f"route for truck {k} is infeasible")
        for pos, (j, s) in enumerate(zip(route, starts)):
            assignments.append(ScheduledTask(sub.tasks[j].id, k, pos, s, s + inst.dur[j]))
        for a, b in zip(route, route[1:]):
            cost += inst.cost[a][b]
            miles += net.miles(inst.dest[a], inst.orig[b], cfg.cost_per_mile)
    assignments.sort(key=lambda a: (a.truck, a.position))
    return Schedule(sub, tuple(assignments), cost, miles, status)


def infeasible_schedule(sub: Subproblem, blocking_task: str | None = None) -> Schedule:
    return Schedule(sub, (), 0, Fraction(0), Status.INFEASIBLE, blocking_task)


class ViolationKind(str, Enum):
    WINDOW = "window"
    DURATION = "duration"
    TRANSITION = "transition"
    UNASSIGNED = "unassigned"
    DOUBLE_ASSIGNED = "double_assigned"
    UNKNOWN_TASK = "unknown_task"
    BAD_TRUCK = "bad_truck"
    BAD_POSITION = "bad_position"
    COST_MISMATCH = "cost_mismatch"
    MILES_MISMATCH = "miles_mismatch"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    task_id: str | None = None
    truck: int | None = None
    detail: str = field(default="", compare=False)


def validate(schedule: Schedule) -> list[Violation]:
    """Recheck a schedule against the subproblem from scratch.

    Deliberately does not reuse :class:`IndexedSubproblem`; every quantity is recomputed
    from the network matrices and the task records.
    """
    sub = schedule.subproblem
    net, cfg = sub.network, sub.config
    tasks = {t.id: t for t in sub.tasks}
    out: list[Violation] = []

    if schedule.status is Status.INFEASIBLE:
        return out

    seen = defaultdict(int)
    per_truck = defaultdict(list)
    for a in schedule.assignments:
        t = tasks.get(a.task_id)
        if t is None:
            out.append(Violation(ViolationKind.UNKNOWN_TASK, a.task_id, a.truck))
            continue
        seen[a.task_id] += 1
        if not 0 <= a.truck < sub.truck_count:
            out.append(Violation(ViolationKind.BAD_TRUCK, a.task_id, a.truck,
                                 f"truck {a.truck} not in 0..{sub.truck_count - 1}"))
        lo = max(0, t.pickup_time - cfg.flexibility)
        hi = t.pickup_time + cfg.flexibility
        if not lo <= a.start <= hi:
            out.append(Violation(ViolationKind.WINDOW, a.task_id, a.truck,
                                 f"start {a.start} outside [{lo}, {hi}]"))
        want = net.travel_minutes(t.origin, t.destination) + 2 * cfg.service_time
        if a.end - a.start != want:
            out.append(Violation(ViolationKind.DURATION, a.task_id, a.truck,
                                 f"duration {a.end - a.start} != {want}"))
        per_truck[a.truck].append(a)

    for tid in tasks:
        if seen[tid] == 0:
            out.append(Violation(ViolationKind.UNASSIGNED, tid))
        elif seen[tid] > 1:
            out.append(Violation(ViolationKind.DOUBLE_ASSIGNED, tid))

    cost = 0
    miles = Fraction(0)
    for truck in sorted(per_truck):
        seq = sorted(per_truck[truck], key=lambda a: a.position)
        if [a.position for a in seq] != list(range(len(seq))):
            out.append(Violation(ViolationKind.BAD_POSITION, None, truck,
                                 f"positions {[a.position for a in seq]}"))
        for prev, nxt in zip(seq, seq[1:]):
            tp, tn = tasks[prev.task_id], tasks[nxt.task_id]
            gap = net.travel_minutes(tp.destination, tn.origin)
            if nxt.start < prev.end + gap:
                out.append(Violation(ViolationKind.TRANSITION, nxt.task_id, truck,
                                     f"starts {nxt.start} before {prev.end} + {gap}"))
            cost += net.cost(tp.destination, tn.origin)
            miles += net.miles(tp.destination, tn.origin, cfg.cost_per_mile)
    if cost != schedule.empty_cost:
        out.append(Violation(ViolationKind.COST_MISMATCH, None, None,
                             f"reported {schedule.empty_cost}, recomputed {cost}"))
    if miles != schedule.empty_miles:
        out.append(Violation(ViolationKind.MILES_MISMATCH, None, None,
                             f"reported {schedule.empty_miles}, recomputed {miles}"))
    return out
