"""Depth-first branch and bound for small subproblems."""

from __future__ import annotations

import time
from fractions import Fraction

from ..errors import NoTrucksError
from ..model import Subproblem
from .schedule import IndexedSubproblem, Schedule, Status, build_schedule, infeasible_schedule

INF = float("inf")


def solve_exact(sub: Subproblem, time_limit: float = 60.0) -> Schedule:
    """Minimize total relocation cost by exhaustive branch and bound.

    Trucks of a subproblem are interchangeable and start wherever their first
    task begins, so a solution is a set of task chains. Chains are built one
    at a time and ordered by the index of their first task, which removes the
    truck-label symmetry. Within a chain, tasks start as early as possible.

    The first optimal solution met in the search order is returned, so equal
    inputs give identical schedules.
    """
    n = len(sub.tasks)
    if n == 0:
        return build_schedule(sub, [[] for _ in range(sub.truck_count)], Status.OPTIMAL)
    if sub.truck_count == 0:
        raise NoTrucksError(f"{sub.name}: {n} tasks but no trucks")

    inst = IndexedSubproblem(sub)
    K = sub.truck_count
    lo, hi, dur, setup, cost = inst.lo, inst.hi, inst.dur, inst.setup, inst.cost

    # cheapest feasible incoming relocation per task; INF means it must head a chain
    min_in = []
    for j in range(n):
        best = INF
        for i in range(n):
            if i != j and lo[i] + dur[i] + setup[i][j] <= hi[j]:
                best = min(best, cost[i][j])
        min_in.append(best)

    deadline = time.monotonic() + time_limit
    best_cost = INF
    best_routes = None
    timed_out = False
    nodes = 0
    unassigned = set(range(n))
    routes: list[list[int]] = []

    def lower_bound(partial, free_heads):
        vals = sorted((min_in[j] for j in unassigned), reverse=True)
        rest = vals[free_heads:]
        if rest and rest[0] == INF:
            return INF
        return partial + sum(rest)

    def dfs(partial, last, free_at, chains_used):
        nonlocal best_cost, best_routes, timed_out, nodes
        if timed_out:
            return
        nodes += 1
        if nodes & 2047 == 0 and time.monotonic() > deadline:
            timed_out = True
            return
        if not unassigned:
            if partial < best_cost:
                best_cost = partial
                best_routes = [list(r) for r in routes]
            return
        if lower_bound(partial, K - chains_used) >= best_cost:
            return
        route = routes[-1]
        for j in sorted(unassigned):
            s = max(lo[j], free_at + setup[last][j])
            if s > hi[j]:
                continue
            c = partial + cost[last][j]
            if c >= best_cost:
                continue
            unassigned.discard(j)
            route.append(j)
            dfs(c, j, s + dur[j], chains_used)
            route.pop()
            unassigned.add(j)
        if chains_used < K:
            head = route[0]
            open_chain(partial, chains_used, head)

    def open_chain(partial, chains_used, after):
        for j in sorted(unassigned):
            if j <= after:
                continue
            unassigned.discard(j)
            routes.append([j])
            dfs(partial, j, lo[j] + dur[j], chains_used + 1)
            routes.pop()
            unassigned.add(j)
            if timed_out:
                return

    open_chain(0, 0, -1)

    if best_routes is None:
        if timed_out:
            return Schedule(sub, (), 0, Fraction(0), Status.TIMED_OUT)
        return infeasible_schedule(sub)
    best_routes += [[] for _ in range(K - len(best_routes))]
    return build_schedule(sub, best_routes, Status.TIMED_OUT if timed_out else Status.OPTIMAL, inst)
