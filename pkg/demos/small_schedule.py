"""
Scheduling a handful of autonomous legs
=======================================

Solve a tiny random subproblem three ways (branch and bound, brute force,
large neighborhood search) and check that they agree.
"""

from athn.generator import random_subproblem
from athn.scheduler import brute_force_oracle, solve_exact, solve_heuristic, validate

# Seven hub-to-hub tasks, two trucks, pickup times spread over two days.
sub = random_subproblem(seed=7, n_tasks=7, n_trucks=2, extent=200, span=2880)
for t in sub.tasks:
    print(f"{t.id}: {t.origin} -> {t.destination}, pickup at minute {t.pickup_time}")

exact = solve_exact(sub)
print("exact:", exact.status.value, "empty miles", float(exact.empty_miles))
print("brute force cost:", brute_force_oracle(sub), "vs exact cost:", exact.empty_cost)

# The heuristic never beats the optimum; on instances this small it usually matches it.
lns = solve_heuristic(sub, time_limit=5, seed=0)
print("heuristic empty miles", float(lns.empty_miles))

# Every schedule is checked by an independent validator.
assert validate(exact) == [] and validate(lns) == []
for k, route in enumerate(exact.routes()):
    print(f"truck {k}:", ", ".join(f"{a.task_id}@{a.start}" for a in route))
