"""Command line entry point: ``athn <verb> ...``.

Exit codes: 0 success, 1 infeasible subproblem, 2 input error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import io as athn_io
from .costing import sweep_alpha, sweep_delta, sweep_to_csv, sweep_to_text
from .errors import AthnError
from .gantt import gantt_svg, route_svg
from .generator import SyntheticSpec, generate_instance
from .ingest import (
    AccessPointHistogram,
    CodeMap,
    derive_orders,
    parse_stop_records,
    place_hubs,
    read_matrix_csv,
)
from .model import Config, Fleet, Instance, Location, LocationKind, Network, nearest_hubs
from .pipeline import PipelineOptions, PipelineResult, run_instance
from .selection import select_all, select_mode

log = logging.getLogger("athn")

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT = 0, 1, 2


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=d(0), help="random seed")
    parser.add_argument("--time-limit", type=float, default=d(60.0),
                        help="seconds per subproblem")
    parser.add_argument("--alpha", type=Fraction, default=d(None),
                        help="autonomous cost reduction, e.g. 0.25")
    parser.add_argument("--delta", type=int, default=d(None), help="appointment flexibility (min)")
    parser.add_argument("--trucks", type=int, default=d(None), help="number of autonomous trucks")
    parser.add_argument("--exact-threshold", type=int, default=d(8),
                        help="largest subproblem solved exactly")
    parser.add_argument("--iterations", type=int, default=d(None),
                        help="LNS iteration budget (default scales with size)")
    parser.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="athn", description=__doc__.splitlines()[0])
    _common(p, suppress=False)
    sub = p.add_subparsers(dest="verb", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, suppress=True)

    g = sub.add_parser("generate", parents=[common], help="write a synthetic instance")
    g.add_argument("-o", "--out", required=True)
    g.add_argument("--hubs", type=int, default=17)
    g.add_argument("--orders", type=int, default=494)
    g.add_argument("--customers", type=int, default=120)
    g.add_argument("--trip-miles", type=float, default=431.0,
                   help="mean round-trip length of an order")

    i = sub.add_parser("ingest", parents=[common], help="build an instance from stop records")
    i.add_argument("stops")
    i.add_argument("--matrix", required=True, help="CSV location,location,miles,minutes")
    i.add_argument("--access", required=True, help="CSV location,count of highway access events")
    i.add_argument("-k", "--hub-count", type=int, default=17)
    i.add_argument("--min-separation", type=float, default=50.0)
    i.add_argument("--code-map", help="CSV kind,code,loaded[,delivery]")
    i.add_argument("--all-orders", action="store_true",
                   help="keep non-challenging orders as well")
    i.add_argument("-o", "--out", required=True)

    s = sub.add_parser("select", parents=[common], help="direct vs. hub-network decision per order")
    s.add_argument("instance")
    s.add_argument("-o", "--out", help="write decisions as JSON")

    v = sub.add_parser("solve", parents=[common], help="run the full pipeline")
    v.add_argument("instance")
    v.add_argument("-o", "--out", required=True, help="schedule JSON")
    v.add_argument("--table", help="cost table text file")
    v.add_argument("--csv", help="cost table CSV file")

    r = sub.add_parser("report", parents=[common], help="cost table from a schedule file")
    r.add_argument("instance")
    r.add_argument("schedule")
    r.add_argument("--csv", action="store_true")

    gt = sub.add_parser("gantt", parents=[common], help="SVG Gantt chart of a schedule")
    gt.add_argument("schedule")
    gt.add_argument("-o", "--out", required=True)
    gt.add_argument("--subproblem")
    gt.add_argument("--route-truck", type=int, help="draw this truck's route instead")
    gt.add_argument("--instance", help="instance file, needed for --route-truck")

    for name, what in (("sweep-alpha", "alphas"), ("sweep-delta", "deltas")):
        w = sub.add_parser(name, parents=[common], help=f"rerun the pipeline over {what}")
        w.add_argument("instance")
        w.add_argument(f"--{what}", required=True, help="comma separated values")
        w.add_argument("--solver", choices=("auto", "exact", "heuristic"), default="auto")
        w.add_argument("--csv", action="store_true")
    return p


def _options(args, solver: str = "auto") -> PipelineOptions:
    return PipelineOptions(exact_threshold=args.exact_threshold, time_limit=args.time_limit,
                           seed=args.seed, iterations=args.iterations, solver=solver)


def load_instance(path, args=None) -> Instance:
    inst = athn_io.instance_from_json(Path(path).read_text())
    if args is not None:
        changes = {}
        if args.alpha is not None:
            changes["alpha"] = args.alpha
        if args.delta is not None:
            changes["flexibility"] = args.delta
        if changes:
            inst = inst.with_config(**changes)
        if args.trucks is not None:
            inst = inst.with_autonomous_trucks(args.trucks)
    return inst


def run_pipeline(instance_path, out_path, options: PipelineOptions | None = None,
                 table_path=None, csv_path=None, args=None) -> PipelineResult:
    """Solve an instance file and write the schedule and cost table artifacts."""
    inst = load_instance(instance_path, args)
    result = run_instance(inst, options)
    Path(out_path).write_text(athn_io.schedules_to_json(result.schedules))
    if table_path:
        Path(table_path).write_text(result.cost_table.to_text())
    if csv_path:
        Path(csv_path).write_text(result.cost_table.to_csv())
    return result


def _cmd_generate(args) -> int:
    cfg = Config()
    if args.alpha is not None:
        cfg = cfg.replace(alpha=args.alpha)
    if args.delta is not None:
        cfg = cfg.replace(flexibility=args.delta)
    spec = SyntheticSpec(hub_count=args.hubs, order_count=args.orders,
                         customer_count=args.customers, seed=args.seed,
                         target_trip_miles=args.trip_miles,
                         autonomous_trucks=50 if args.trucks is None else args.trucks, config=cfg)
    Path(args.out).write_text(athn_io.instance_to_json(generate_instance(spec)))
    return EXIT_OK


def _cmd_ingest(args) -> int:
    records = parse_stop_records(Path(args.stops).read_text())
    keys, miles, minutes = read_matrix_csv(Path(args.matrix).read_text())
    index = {k: i for i, k in enumerate(keys)}
    hist = AccessPointHistogram.from_csv(Path(args.access).read_text())
    unknown = [c for c in hist.counts if c not in index]
    if unknown:
        raise AthnError(f"access points missing from the matrix: {unknown[:5]}")
    hub_keys = place_hubs(hist, args.hub_count, args.min_separation,
                          {a: {b: miles[index[a], index[b]] for b in hist.counts} for a in hist.counts})
    codes = CodeMap.from_csv(Path(args.code_map).read_text()) if args.code_map else None

    cust_keys = []
    for r in records:
        if r.location not in cust_keys:
            cust_keys.append(r.location)
    missing = [c for c in cust_keys if c not in index]
    if missing:
        raise AthnError(f"stop locations missing from the matrix: {missing[:5]}")
    all_keys = hub_keys + cust_keys
    rows = [index[k] for k in all_keys]
    m = miles[rows][:, rows]
    t = minutes[rows][:, rows]
    cfg = Config()
    if args.alpha is not None:
        cfg = cfg.replace(alpha=args.alpha)
    if args.delta is not None:
        cfg = cfg.replace(flexibility=args.delta)
    locations = [Location(i, LocationKind.HUB, f"hub {k}") for i, k in enumerate(hub_keys)]
    locations += [Location(len(hub_keys) + i, LocationKind.CUSTOMER, k) for i, k in enumerate(cust_keys)]
    network = Network(tuple(locations), t, m * cfg.cost_per_mile, m)
    ids = {k: len(hub_keys) + i for i, k in enumerate(cust_keys)}
    derived = derive_orders(records, codes, ids)
    orders = tuple(d.order for d in derived if args.all_orders or d.challenging)
    horizon = max([o.pickup_time for o in orders] + [cfg.horizon - 1]) + 1
    hub_of = nearest_hubs(network)
    touching = {h: 0 for h in network.hubs}
    for o in orders:
        touching[hub_of[o.origin]] += 1
        touching[hub_of[o.destination]] += 1
    fleet = Fleet(50 if args.trucks is None else args.trucks,
                  {h: max(1, c) for h, c in touching.items()})
    inst = Instance(network, orders, fleet, cfg.replace(horizon=horizon))
    Path(args.out).write_text(athn_io.instance_to_json(inst))
    print(f"{len(derived)} orders, {len(orders)} kept, {len(hub_keys)} hubs")
    return EXIT_OK


def _cmd_select(args) -> int:
    inst = load_instance(args.instance, args)
    hub_of = inst.hub_of
    athn, direct, summary = select_all(inst.orders, inst.network, hub_of, inst.config)
    print(f"hub network: {summary.athn_count}  direct: {summary.direct_count}  "
          f"share: {summary.athn_share:.0%}")
    if args.out:
        decisions = [select_mode(o, inst.network, hub_of, inst.config)
                     for o in sorted(inst.orders, key=lambda o: o.id)]
        doc = {"schema_version": athn_io.SCHEMA_VERSION,
               "decisions": [{"order": d.order_id, "mode": d.mode.value,
                              "direct_cost": d.direct_cost, "athn_cost": d.athn_cost}
                             for d in decisions]}
        Path(args.out).write_text(athn_io.dump_any(doc))
    return EXIT_OK


def _cmd_solve(args) -> int:
    result = run_pipeline(args.instance, args.out, _options(args), args.table, args.csv, args)
    for s in result.schedules:
        log.info("%s: %d tasks, %s, empty miles %s", s.subproblem.name, len(s.subproblem.tasks),
                 s.status.value, float(s.empty_miles))
    bad = result.infeasible
    if bad:
        for s in bad:
            blocker = f" (blocking task {s.blocking_task})" if s.blocking_task else ""
            print(f"infeasible subproblem {s.subproblem.name}{blocker}", file=sys.stderr)
        return EXIT_INFEASIBLE
    print(result.cost_table.to_text(), end="")
    print(f"autonomous empty-mile share: {result.autonomous_empty_share:.1%}")
    return EXIT_OK


def _cmd_report(args) -> int:
    from .costing import build_cost_table
    from .model import SubproblemKind

    inst = load_instance(args.instance, args)
    schedules = athn_io.schedules_from_json(Path(args.schedule).read_text(), inst)
    net, cfg = inst.network, inst.config
    hub_of = inst.hub_of
    orders = {o.id: o for o in inst.orders}
    rate = cfg.cost_per_mile
    cur_l = cur_e = aut_l = aut_e = fl_l = Fraction(0)
    for s in schedules:
        if s.subproblem.kind is not SubproblemKind.AUTONOMOUS:
            continue
        aut_e += s.empty_miles
        for t in s.subproblem.tasks:
            o = orders[t.order_id]
            h1, h2 = hub_of[o.origin], hub_of[o.destination]
            cur_l += net.miles(o.origin, o.destination, rate)
            cur_e += net.miles(o.destination, o.origin, rate)
            aut_l += net.miles(h1, h2, rate)
            fl_l += net.miles(o.origin, h1, rate) + net.miles(h2, o.destination, rate)
    table = build_cost_table((cur_l, cur_e), (aut_l, aut_e), fl_l, cfg)
    print(table.to_csv() if args.csv else table.to_text(), end="")
    return EXIT_OK


def _cmd_gantt(args) -> int:
    doc = athn_io.load_schedule_document(Path(args.schedule).read_text())
    if args.route_truck is not None:
        if not args.instance:
            raise AthnError("--route-truck needs --instance")
        svg = route_svg(doc, load_instance(args.instance), args.route_truck, args.subproblem)
    else:
        svg = gantt_svg(doc, args.subproblem)
    Path(args.out).write_text(svg)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    inst = load_instance(args.instance, args)
    opts = _options(args, args.solver)
    if args.verb == "sweep-alpha":
        values = [Fraction(v.strip()) for v in args.alphas.split(",")]
        rows, label = sweep_alpha(inst, values, opts), "alpha"
    else:
        values = [int(v) for v in args.deltas.split(",")]
        rows, label = sweep_delta(inst, values, opts), "delta"
    print(sweep_to_csv(rows, label) if args.csv else sweep_to_text(rows, label), end="")
    return EXIT_OK


COMMANDS = {
    "generate": _cmd_generate,
    "ingest": _cmd_ingest,
    "select": _cmd_select,
    "solve": _cmd_solve,
    "report": _cmd_report,
    "gantt": _cmd_gantt,
    "sweep-alpha": _cmd_sweep,
    "sweep-delta": _cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.verb](args)
    except (AthnError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
