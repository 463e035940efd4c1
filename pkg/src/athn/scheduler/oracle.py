"""Exhaustive ground truth for tiny subproblems."""

from __future__ import annotations

from itertools import permutations, product

from ..errors import NoTrucksError, TooLargeError
from ..model import Subproblem

MAX_ORACLE_TASKS = 8


def brute_force_oracle(sub: Subproblem) -> int | None:
    """Minimum total relocation cost over every assignment and ordering.

    Returns None when no assignment satisfies all windows. Start times are
    propagated forward from the earliest window edge, which decides
    feasibility of a fixed ordering because starting later never helps a
    successor.

    Enumeration runs over every truck-label assignment; the best ordering of
    each task subset is computed once by trying all of its permutations.
    """
    n = len(sub.tasks)
    if n > MAX_ORACLE_TASKS:
        raise TooLargeError(f"{n} tasks exceeds oracle limit {MAX_ORACLE_TASKS}")
    if n == 0:
        return 0
    if sub.truck_count == 0:
        raise NoTrucksError("no trucks")

    net, cfg = sub.network, sub.config
    tasks = sub.tasks
    flex = cfg.flexibility

    def ordering_cost(order):
        free_at = None
        prev = None
        total = 0
        for t in order:
            lo = max(0, t.pickup_time - flex)
            hi = t.pickup_time + flex
            if prev is None:
                start = lo
            else:
                start = max(lo, free_at + net.travel_minutes(prev.destination, t.origin))
                total += net.cost(prev.destination, t.origin)
            if start > hi:
                return None
            free_at = start + net.travel_minutes(t.origin, t.destination) + 2 * cfg.service_time
            prev = t
        return total

    best_subset = {0: 0}
    for mask in range(1, 1 << n):
        members = [tasks[i] for i in range(n) if mask >> i & 1]
        best = None
        for order in permutations(members):
            c = ordering_cost(order)
            if c is not None and (best is None or c < best):
                best = c
        best_subset[mask] = best

    k = min(sub.truck_count, n)
    best_total = None
    for labels in product(range(k), repeat=n):
        masks = [0] * k
        for i, lab in enumerate(labels):
            masks[lab] |= 1 << i
        total = 0
        for m in masks:
            c = best_subset[m]
            if c is None:
                break
            total += c
        else:
            if best_total is None or total < best_total:
                best_total = total
    return best_total
