"""Freight scheduling and cost analysis for autonomous transfer hub networks."""

from .model import (
    Config,
    Fleet,
    Leg,
    Location,
    LocationKind,
    Network,
    Order,
    Subproblem,
    SubproblemKind,
    Task,
    TruckClass,
    decompose,
    generate_tasks,
    nearest_hubs,
)

__version__ = "0.1.0"
