"""
Mileage and cost accounting for the current network versus the hub network,
and the scenario sweeps over the autonomous discount and the appointment
flexibility.

All arithmetic is exact (``Fraction``); rounding to whole dollars and whole
percentages (half-up) happens only for display.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ConfigError
from .model import Config


def round_half_up(x) -> int:
    return math.floor(Fraction(x) + Fraction(1, 2))


def whole_pct(part, whole) -> int:
    if not whole:
        return 0
    return round_half_up(Fraction(part) * 100 / Fraction(whole))


@dataclass(frozen=True)
class CostGroup:
    name: str
    loaded_miles: Fraction
    empty_miles: Fraction
    cost_per_mile: int  # milli-dollars
    cost_adjustment: Fraction = Fraction(1)

    @property
    def total_miles(self) -> Fraction:
        return self.loaded_miles + self.empty_miles

    @property
    def empty_pct(self) -> int:
        return whole_pct(self.empty_miles, self.total_miles)

    @property
    def loaded_pct(self) -> int:
        return 100 - self.empty_pct if self.total_miles else 0

    def dollars(self, miles) -> Fraction:
        return Fraction(miles) * self.cost_per_mile / 1000

    @property
    def cost_without_autonomy(self) -> Fraction:
        return self.dollars(self.total_miles)

    @property
    def adjusted_cost(self) -> Fraction:
        return self.cost_without_autonomy * self.cost_adjustment

    def rows(self):
        """(label, miles, pct, cost w/o autonomy, adjustment, cost) for loaded/empty/total."""
        adj = self.cost_adjustment
        for label, miles, pct in (("Loaded", self.loaded_miles, self.loaded_pct),
                                  ("Empty", self.empty_miles, self.empty_pct),
                                  ("Total", self.total_miles, 100 if self.total_miles else 0)):
            raw = self.dollars(miles)
            yield label, miles, pct, raw, adj, raw * adj


@dataclass(frozen=True)
class CostTable:
    current: CostGroup
    autonomous: CostGroup
    first_last: CostGroup

    @property
    def groups(self) -> tuple[CostGroup, ...]:
        return (self.current, self.autonomous, self.first_last)

    @property
    def athn_miles(self) -> Fraction:
        return self.autonomous.total_miles + self.first_last.total_miles

    @property
    def athn_cost_without_autonomy(self) -> Fraction:
        return self.autonomous.cost_without_autonomy + self.first_last.cost_without_autonomy

    @property
    def athn_cost(self) -> Fraction:
        return self.autonomous.adjusted_cost + self.first_last.adjusted_cost

    @property
    def current_cost(self) -> Fraction:
        return self.current.adjusted_cost

    @property
    def savings_miles(self) -> Fraction:
        return self.current.total_miles - self.athn_miles

    @property
    def savings_without_autonomy(self) -> Fraction:
        return self.current.cost_without_autonomy - self.athn_cost_without_autonomy

    @property
    def savings_dollars(self) -> Fraction:
        return self.current_cost - self.athn_cost

    @property
    def savings_pct(self) -> int:
        return whole_pct(self.savings_dollars, self.current_cost)

    @property
    def savings_miles_pct(self) -> int:
        return whole_pct(self.savings_miles, self.current.total_miles)

    def to_text(self) -> str:
        lines = [f"{'':<30}{'Mileage':>10}{'% total':>9}{'Cost w/o aut.':>15}{'Adj.':>6}{'Cost':>13}"]
        titles = {"current": "Current network", "autonomous": "ATHN autonomous",
                  "first_last": "ATHN first/last mile"}
        for g in self.groups:
            for label, miles, pct, raw, adj, cost in g.rows():
                name = titles.get(g.name, g.name) if label == "Loaded" else ""
                lines.append(f"{name:<22}{label:<8}{round_half_up(miles):>10,}{pct:>8}%"
                             f"{'$':>3}{round_half_up(raw):>12,}{float(adj):>6.2f}"
                             f"{'$':>3}{round_half_up(cost):>10,}")
        lines.append(f"{'ATHN total':<30}{round_half_up(self.athn_miles):>10,}{'':>9}"
                     f"{'$':>3}{round_half_up(self.athn_cost_without_autonomy):>12,}{'':>6}"
                     f"{'$':>3}{round_half_up(self.athn_cost):>10,}")
        lines.append(f"{'Savings':<30}{round_half_up(self.savings_miles):>10,}{'':>9}"
                     f"{'$':>3}{round_half_up(self.savings_without_autonomy):>12,}{'':>6}"
                     f"{'$':>3}{round_half_up(self.savings_dollars):>10,}")
        unadj_pct = whole_pct(self.savings_without_autonomy, self.current.cost_without_autonomy)
        lines.append(f"{'Savings (%)':<30}{self.savings_miles_pct:>9}%{'':>9}"
                     f"{unadj_pct:>14}%{'':>6}{self.savings_pct:>12}%")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["group", "line", "miles", "pct_of_total", "cost_without_autonomy",
                    "cost_adjustment", "cost"])
        for g in self.groups:
            for label, miles, pct, raw, adj, cost in g.rows():
                w.writerow([g.name, label.lower(), round_half_up(miles), pct, round_half_up(raw),
                            f"{float(adj):.2f}", round_half_up(cost)])
        w.writerow(["athn", "total", round_half_up(self.athn_miles), "",
                    round_half_up(self.athn_cost_without_autonomy), "", round_half_up(self.athn_cost)])
        w.writerow(["savings", "total", round_half_up(self.savings_miles), self.savings_miles_pct,
                    round_half_up(self.savings_without_autonomy), "", round_half_up(self.savings_dollars)])
        w.writerow(["savings", "pct", self.savings_miles_pct, "", "", "", self.savings_pct])
        return buf.getvalue()


def build_cost_table(current: tuple, auto: tuple, fl_loaded, config: Config) -> CostTable:
    """Cost table for the current network and the hub network.

    ``current`` and ``auto`` are (loaded, empty) mileages. First/last-mile
    empty miles are not scheduled here but estimated so that they form the
    fraction ``config.fl_empty_ratio`` of first/last-mile mileage. The
    autonomous group is discounted by ``config.alpha``.

    Raises:
        ConfigError: the empty ratio is not in [0, 1).
    """
    e = config.fl_empty_ratio
    if not 0 <= e < 1:
        raise ConfigError(f"first/last-mile empty ratio must lie in [0, 1), got {e}")
    values = [Fraction(v) for v in (*current, *auto, fl_loaded)]
    if any(v < 0 for v in values):
        raise ConfigError("mileages must be non-negative")
    cur_l, cur_e, aut_l, aut_e, fl_l = values
    fl_e = fl_l * e / (1 - e)
    rate = config.cost_per_mile
    return CostTable(
        CostGroup("current", cur_l, cur_e, rate),
        CostGroup("autonomous", aut_l, aut_e, rate, 1 - config.alpha),
        CostGroup("first_last", fl_l, fl_e, rate),
    )


@dataclass(frozen=True)
class SweepRow:
    value: Fraction | int
    automated_orders: int
    rel_savings_pct: int
    savings_dollars: Fraction
    delta_vs_base_pct: Fraction
    non_monotone: bool = False


def sweep_rows(values: Sequence, results: Sequence) -> list[SweepRow]:
    """Turn (value, pipeline result) pairs into report rows relative to the first."""
    rows = []
    base = None
    best_so_far = None
    for v, res in zip(values, results):
        table = res.cost_table
        s = table.savings_dollars
        if base is None:
            base = s
        delta = (s - base) / base * 100 if base else Fraction(0)
        flag = best_so_far is not None and s < best_so_far
        best_so_far = s if best_so_far is None else max(best_so_far, s)
        rows.append(SweepRow(v, res.selection.athn_count, table.savings_pct, s, delta, flag))
    return rows


def sweep_alpha(instance, alphas: Sequence, options=None) -> list[SweepRow]:
    """Rerun selection, scheduling and costing for each autonomous discount."""
    from .pipeline import PipelineOptions, run_instance

    options = options or PipelineOptions()
    alphas = sorted(Fraction(str(a)) if isinstance(a, float) else Fraction(a) for a in alphas)
    results = [run_instance(instance.with_config(alpha=a), options) for a in alphas]
    return sweep_rows(alphas, results)


def sweep_delta(instance, deltas: Sequence[int], options=None) -> list[SweepRow]:
    """Rerun the pipeline for each appointment flexibility.

    Rows whose savings fall below an earlier row with less flexibility are
    flagged; with an exact solver this cannot happen.
    """
    from .pipeline import PipelineOptions, run_instance

    options = options or PipelineOptions()
    deltas = sorted(int(d) for d in deltas)
    if any(d < 0 for d in deltas):
        raise ConfigError("flexibility must be >= 0")
    results = [run_instance(instance.with_config(flexibility=d), options) for d in deltas]
    return sweep_rows(deltas, results)


def sweep_to_text(rows: Sequence[SweepRow], label: str) -> str:
    lines = [f"{label:>8}{'Autom. orders':>15}{'Rel. savings':>14}{'Cost savings':>15}"
             f"{'vs. base':>10}"]
    for r in rows:
        v = f"{float(r.value) * 100:.0f}%" if isinstance(r.value, Fraction) else str(r.value)
        mark = "  *" if r.non_monotone else ""
        lines.append(f"{v:>8}{r.automated_orders:>15}{r.rel_savings_pct:>13}%"
                     f"{'$':>4}{round_half_up(r.savings_dollars):>11,}"
                     f"{float(r.delta_vs_base_pct):>+9.1f}%{mark}")
    if any(r.non_monotone for r in rows):
        lines.append("* savings below a row with a smaller value (solver did not reach the optimum)")
    return "\n".join(lines) + "\n"


def sweep_to_csv(rows: Sequence[SweepRow], label: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([label, "automated_orders", "rel_savings_pct", "savings_dollars",
                "delta_vs_base_pct", "non_monotone"])
    for r in rows:
        w.writerow([str(r.value), r.automated_orders, r.rel_savings_pct,
                    round_half_up(r.savings_dollars), f"{float(r.delta_vs_base_pct):.1f}",
                    int(r.non_monotone)])
    return buf.getvalue()
