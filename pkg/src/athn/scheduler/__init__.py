"""Assign, sequence and time the tasks of one subproblem."""

from .exact import solve_exact
from .heuristic import solve_heuristic
from .oracle import MAX_ORACLE_TASKS, brute_force_oracle
from .rechain import apply_rechain, rechain_downstream
from .schedule import (
    Schedule,
    ScheduledTask,
    Status,
    Violation,
    ViolationKind,
    build_schedule,
    validate,
)

__all__ = [
    "MAX_ORACLE_TASKS",
    "Schedule",
    "ScheduledTask",
    "Status",
    "Violation",
    "ViolationKind",
    "apply_rechain",
    "brute_force_oracle",
    "build_schedule",
    "rechain_downstream",
    "solve_exact",
    "solve_heuristic",
    "validate",
]
