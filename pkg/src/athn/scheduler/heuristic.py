"""Greedy insertion followed by ruin-and-recreate large neighborhood search."""

from __future__ import annotations

import logging
import random
import time
from itertools import permutations

from ..errors import NoTrucksError
from ..model import Subproblem
from .schedule import IndexedSubproblem, Schedule, Status, build_schedule, infeasible_schedule

log = logging.getLogger(__name__)

TAIL_REPAIR = 4
GREEDY_RESTARTS = 20


class _Routes:
    """Per-truck task sequences with cached earliest/latest start times."""

    def __init__(self, inst: IndexedSubproblem, routes=None, es=None, ls=None):
        self.inst = inst
        k = inst.k
        self.routes = routes if routes is not None else [[] for _ in range(k)]
        self.es = es if es is not None else [[] for _ in range(k)]
        self.ls = ls if ls is not None else [[] for _ in range(k)]

    def copy(self) -> "_Routes":
        return _Routes(self.inst, list(self.routes), list(self.es), list(self.ls))

    def refresh(self, k: int) -> bool:
        inst = self.inst
        route = self.routes[k]
        es = inst.route_starts(route)
        if es is None:
            return False
        ls = [0] * len(route)
        nxt_ls = None
        for p in range(len(route) - 1, -1, -1):
            j = route[p]
            v = inst.hi[j]
            if nxt_ls is not None:
                v = min(v, nxt_ls - inst.setup[j][route[p + 1]] - inst.dur[j])
            ls[p] = v
            nxt_ls = v
        self.es[k] = es
        self.ls[k] = ls
        return True

    def set_route(self, k: int, route: list[int]) -> bool:
        self.routes[k] = route
        return self.refresh(k)

    def cost(self) -> int:
        return sum(self.inst.route_cost(r) for r in self.routes)

    def best_insertion(self, j: int, spread: bool = False, rng: random.Random | None = None):
        """Cheapest feasible (delta, truck, position) for task j, or None.

        ``spread`` makes an unused truck win over any occupied one; ``rng``
        jitters each candidate's cost. Both only serve to diversify restarts.
        """
        inst = self.inst
        lo_j, hi_j, dur_j = inst.lo[j], inst.hi[j], inst.dur[j]
        setup, cost = inst.setup, inst.cost
        best = None
        empty_seen = False
        for k, route in enumerate(self.routes):
            if not route:
                if empty_seen:
                    continue
                empty_seen = True
                if spread:
                    return (0, k, 0)
                if best is None or 0 < best[0]:
                    best = (0, k, 0)
                continue
            es, ls = self.es[k], self.ls[k]
            m = len(route)
            for p in range(m + 1):
                if p == 0:
                    s = lo_j
                else:
                    prev = route[p - 1]
                    free = es[p - 1] + inst.dur[prev]
                    if free > hi_j:
                        break  # later predecessors end even later
                    s = max(lo_j, free + setup[prev][j])
                    if s > hi_j:
                        continue
                if p < m:
                    nxt = route[p]
                    if s + dur_j + setup[j][nxt] > ls[p]:
                        continue
                    delta = cost[j][nxt]
                    if p > 0:
                        delta += cost[route[p - 1]][j] - cost[route[p - 1]][nxt]
                else:
                    delta = cost[route[p - 1]][j]
                if rng is not None:
                    delta *= rng.uniform(0.5, 1.5)
                if best is None or delta < best[0]:
                    best = (delta, k, p)
        return best

    def insert(self, j: int, spread: bool = False, rng: random.Random | None = None) -> bool:
        found = self.best_insertion(j, spread, rng)
        if found is None:
            return False
        _, k, p = found
        route = self.routes[k][:]
        route.insert(p, j)
        return self.set_route(k, route)

    def repair_tail(self, j: int) -> bool:
        """Try every ordering of j together with the tail of each truck's route."""
        inst = self.inst
        best = None
        for k, route in enumerate(self.routes):
            if not route:
                continue
            cut = max(0, len(route) - TAIL_REPAIR)
            head, tail = route[:cut], route[cut:]
            for perm in permutations(tail + [j]):
                cand = head + list(perm)
                if inst.route_starts(cand) is None:
                    continue
                c = inst.route_cost(cand) - inst.route_cost(route)
                if best is None or c < best[0]:
                    best = (c, k, cand)
        if best is None:
            return False
        return self.set_route(best[1], best[2])


def _greedy(inst: IndexedSubproblem, order: list[int], spread: bool = False,
            rng: random.Random | None = None) -> tuple[_Routes | None, int | None]:
    state = _Routes(inst)
    for j in order:
        if not state.insert(j, spread, rng) and not state.repair_tail(j):
            return None, j
    return state, None


def _chain_lower_bound(inst: IndexedSubproblem) -> int:
    n, k = inst.n, inst.k
    vals = []
    for j in range(n):
        feas = [inst.cost[i][j] for i in range(n)
                if i != j and inst.lo[i] + inst.dur[i] + inst.setup[i][j] <= inst.hi[j]]
        vals.append(min(feas) if feas else None)
    heads = sum(v is None for v in vals)
    finite = sorted((v for v in vals if v is not None), reverse=True)
    return sum(finite[max(0, k - heads):])


def solve_heuristic(sub: Subproblem, time_limit: float = 60.0, seed: int = 0,
                    iterations: int | None = None, stall_limit: int | None = None) -> Schedule:
    """Greedy construction in pickup-time order, improved by large neighborhood search.

    Each LNS step removes 2..min(8, n/4) tasks, chosen either at random or by
    relatedness (time and endpoint proximity to a random seed task), and
    reinserts them at their cheapest feasible positions. Equal-cost moves
    are accepted. The search stops after ``iterations`` steps, after
    ``stall_limit`` steps without strict improvement, when a lower bound is
    reached, or at ``time_limit`` seconds, whichever comes first. Only the
    wall-clock cap can make results depend on machine speed.
    """
    n = len(sub.tasks)
    if n == 0:
        return build_schedule(sub, [[] for _ in range(sub.truck_count)], Status.FEASIBLE)
    if sub.truck_count == 0:
        raise NoTrucksError(f"{sub.name}: {n} tasks but no trucks")

    deadline = time.monotonic() + time_limit
    rng = random.Random(seed)
    inst = IndexedSubproblem(sub)
    if iterations is None:
        iterations = 2000 + 60 * n
    if stall_limit is None:
        stall_limit = 500 + 10 * n

    base_order = sorted(range(n), key=lambda j: (sub.tasks[j].pickup_time, j))
    state, blocking = _greedy(inst, base_order)
    attempt = 0
    while state is None and attempt < GREEDY_RESTARTS:
        # restarts alternate between filling idle trucks first and jittered
        # insertion costs; all but the first also perturb the order
        attempt += 1
        order = base_order
        if attempt > 1:
            flex = sub.config.flexibility + 1
            order = sorted(range(n), key=lambda j: (sub.tasks[j].pickup_time
                                                    + rng.randrange(2 * flex), j))
        if attempt % 2:
            state, _ = _greedy(inst, order, spread=True)
        else:
            state, _ = _greedy(inst, order, rng=rng)
    if state is None:
        log.info("%s: greedy construction failed at task %s", sub.name, sub.tasks[blocking].id)
        return infeasible_schedule(sub, sub.tasks[blocking].id)

    current = state.cost()
    bound = _chain_lower_bound(inst)
    max_remove = max(2, min(8, n // 4))
    min_remove = min(2, n)
    relatedness = _relatedness(inst, sub)
    stall = 0
    it = 0
    while it < iterations and stall < stall_limit and current > bound:
        if time.monotonic() > deadline:
            log.info("%s: LNS time limit reached after %d iterations", sub.name, it)
            break
        it += 1
        q = min(n, rng.randint(min_remove, max_remove))
        if rng.random() < 0.5:
            removed = rng.sample(range(n), q)
        else:
            removed = _related_removal(rng, relatedness, n, q)
        trial = state.copy()
        gone = set(removed)
        for k, route in enumerate(trial.routes):
            if gone.intersection(route):
                trial.set_route(k, [j for j in route if j not in gone])
        if rng.random() < 0.5:
            removed.sort(key=lambda j: (inst.lo[j], j))
        else:
            rng.shuffle(removed)
        if not all(trial.insert(j) for j in removed):
            stall += 1
            continue
        c = trial.cost()
        if c < current:
            stall = 0
        else:
            stall += 1
        if c <= current:
            state, current = trial, c

    return build_schedule(sub, state.routes, Status.FEASIBLE, inst)


def _relatedness(inst: IndexedSubproblem, sub: Subproblem):
    net = sub.network
    tasks = sub.tasks
    n = inst.n
    ranked = []
    for a in range(n):
        ta = tasks[a]
        score = []
        for b in range(n):
            if a == b:
                continue
            tb = tasks[b]
            d = (abs(ta.pickup_time - tb.pickup_time)
                 + net.travel_minutes(ta.origin, tb.origin) + net.travel_minutes(ta.destination, tb.destination))
            score.append((d, b))
        score.sort()
        ranked.append([b for _, b in score])
    return ranked


def _related_removal(rng: random.Random, ranked, n: int, q: int) -> list[int]:
    seed_task = rng.randrange(n)
    out = [seed_task]
    chosen = {seed_task}
    while len(out) < q:
        ref = out[rng.randrange(len(out))]
        cand = [b for b in ranked[ref] if b not in chosen]
        # bias toward the most related candidates
        pick = cand[int(len(cand) * rng.random() ** 4)]
        out.append(pick)
        chosen.add(pick)
    return out
