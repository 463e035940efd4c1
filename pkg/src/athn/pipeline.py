"""End-to-end run: selection, decomposition, scheduling, re-chaining and costing."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .costing import CostTable, build_cost_table
from .model import Instance, Leg, SubproblemKind, decompose, generate_tasks
from .scheduler import Schedule, Status, apply_rechain, rechain_downstream, solve_exact, solve_heuristic
from .selection import SelectionSummary, select_all

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineOptions:
    exact_threshold: int = 8
    time_limit: float = 60.0
    seed: int = 0
    iterations: int | None = None
    solver: str = "auto"  # auto | exact | heuristic


@dataclass
class PipelineResult:
    selection: SelectionSummary
    athn_orders: list
    direct_orders: list
    schedules: list[Schedule] = field(default_factory=list)
    last_mile_pickups: dict = field(default_factory=dict)
    cost_table: CostTable | None = None
    fl_scheduled_empty_miles: Fraction = Fraction(0)

    @property
    def infeasible(self) -> list[Schedule]:
        return [s for s in self.schedules if not s.feasible]

    @property
    def autonomous(self) -> Schedule | None:
        for s in self.schedules:
            if s.subproblem.kind is SubproblemKind.AUTONOMOUS:
                return s
        return None

    @property
    def autonomous_empty_share(self) -> float:
        t = self.cost_table
        total = t.autonomous.total_miles
        return float(t.autonomous.empty_miles / total) if total else 0.0


def solve_subproblem(sub, options: PipelineOptions, seed: int) -> Schedule:
    """Exact search for small subproblems, LNS otherwise."""
    use_exact = options.solver == "exact" or (
        options.solver == "auto" and len(sub.tasks) <= options.exact_threshold)
    if use_exact:
        sched = solve_exact(sub, options.time_limit)
        if sched.status is not Status.TIMED_OUT or sched.assignments:
            return sched
        log.info("%s: exact search timed out without a solution, falling back to LNS", sub.name)
    return solve_heuristic(sub, options.time_limit, seed=seed, iterations=options.iterations)


def run_instance(instance: Instance, options: PipelineOptions | None = None) -> PipelineResult:
    options = options or PipelineOptions()
    net, cfg = instance.network, instance.config
    hub_of = instance.hub_of
    athn, direct, summary = select_all(instance.orders, net, hub_of, cfg)
    result = PipelineResult(summary, athn, direct)

    tasks = [t for o in athn for t in generate_tasks(o, net, hub_of, cfg)]
    subs = decompose(tasks, instance.fleet, net, cfg)
    auto_subs = [s for s in subs if s.kind is SubproblemKind.AUTONOMOUS]
    for sub in auto_subs:
        sched = solve_subproblem(sub, options, options.seed)
        result.schedules.append(sched)
        if sched.feasible:
            result.last_mile_pickups = rechain_downstream(sched)

    local_tasks = apply_rechain([t for t in tasks if t.leg is not Leg.AUTONOMOUS],
                                result.last_mile_pickups)
    for i, sub in enumerate(decompose(local_tasks, instance.fleet, net, cfg), start=1):
        result.schedules.append(solve_subproblem(sub, options, options.seed + i))

    rate = cfg.cost_per_mile
    cur_l = cur_e = aut_l = fl_l = Fraction(0)
    for o in athn:
        h1, h2 = hub_of[o.origin], hub_of[o.destination]
        cur_l += net.miles(o.origin, o.destination, rate)
        cur_e += net.miles(o.destination, o.origin, rate)
        aut_l += net.miles(h1, h2, rate)
        fl_l += net.miles(o.origin, h1, rate) + net.miles(h2, o.destination, rate)
    auto = result.autonomous
    aut_e = auto.empty_miles if auto is not None else Fraction(0)
    result.cost_table = build_cost_table((cur_l, cur_e), (aut_l, aut_e), fl_l, cfg)
    result.fl_scheduled_empty_miles = sum(
        (s.empty_miles for s in result.schedules if s.subproblem.kind is SubproblemKind.HUB_LOCAL),
        Fraction(0))
    return result
