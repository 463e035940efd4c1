import json
import re
from pathlib import Path

import pytest

from athn.cli import main
from athn.errors import SchemaError
from athn.gantt import emit_gantt, gantt_svg, route_svg
from athn.generator import SyntheticSpec, generate_instance
from athn.io import (
    instance_from_json,
    instance_to_json,
    load_schedule_document,
    schedules_from_json,
    schedules_to_json,
)
from athn.model import Config, Fleet, Instance, Order
from athn.pipeline import PipelineOptions, run_instance
from athn.scheduler import brute_force_oracle, solve_exact, validate

from conftest import line_network

DATA = Path(__file__).parent / "data"


def hand_instance(orders=None, trucks=1, flexibility=60, hub_trucks=1):
    # hubs at 0 and 300; customers 2..5 at -40, 20, 330, 260
    net = line_network([0, 300], [-40, 20, 330, 260])
    orders = orders if orders is not None else (Order("R1", 2, 5, 1500), Order("R2", 5, 3, 0))
    return Instance(net, tuple(orders), Fleet(trucks, {0: hub_trucks, 1: hub_trucks}),
                    Config(flexibility=flexibility))


# --- instance and schedule documents -----------------------------------------

def test_instance_round_trip_bytes():
    for inst in (hand_instance(), generate_instance(SyntheticSpec(order_count=30, seed=4))):
        text = instance_to_json(inst)
        assert instance_to_json(instance_from_json(text)) == text


def test_instance_alpha_kept_exact():
    inst = hand_instance().with_config(alpha="7/20")
    back = instance_from_json(instance_to_json(inst))
    assert back.config.alpha == inst.config.alpha


@pytest.mark.parametrize("mutate, where", [
    (lambda d: d.pop("orders"), "missing field orders"),
    (lambda d: d.update(schema_version=9), "schema_version"),
    (lambda d: d["orders"][0].pop("origin"), "orders[0]"),
    (lambda d: d["orders"][1].update(destination=99), "unknown location"),
    (lambda d: d["locations"][0].update(kind="depot"), "locations[0].kind"),
    (lambda d: d["config"].update(alpha="x"), "config.alpha"),
])
def test_instance_schema_errors(mutate, where):
    doc = json.loads(instance_to_json(hand_instance()))
    mutate(doc)
    with pytest.raises(SchemaError, match=re.escape(where)):
        instance_from_json(json.dumps(doc))


def test_bad_json_reports_position():
    with pytest.raises(SchemaError, match="line 2"):
        instance_from_json('{"schema_version": 1,\n oops}')


def test_schedule_round_trip():
    inst = hand_instance()
    res = run_instance(inst)
    text = schedules_to_json(res.schedules)
    back = schedules_from_json(text, inst)
    assert schedules_to_json(back) == text
    assert all(validate(s) == [] for s in back)


def test_schedule_document_checks():
    doc = json.loads((DATA / "gantt_fixture.json").read_text())
    doc["subproblems"][0]["assignments"][0]["task"] = "nope"
    with pytest.raises(SchemaError, match="unknown task"):
        load_schedule_document(json.dumps(doc))
    doc = json.loads((DATA / "gantt_fixture.json").read_text())
    doc["subproblems"][0]["assignments"][0]["truck"] = 5
    with pytest.raises(SchemaError, match="truck 5"):
        load_schedule_document(json.dumps(doc))


# --- Gantt -----------------------------------------------------------------------

def _bars(svg):
    return re.findall(r'<rect class="(task|relocation)"[^>]*fill="(#[0-9a-f]+)"', svg)


def test_gantt_empty_schedule_has_axes_only():
    svg = gantt_svg({"schema_version": 1, "service_time": 30, "subproblems": []})
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert 'class="axis"' in svg and _bars(svg) == []


def test_gantt_two_tasks_one_relocation():
    inst = hand_instance(orders=[], trucks=1)
    from athn.model import Leg, Subproblem, SubproblemKind, Task

    sub = Subproblem(SubproblemKind.AUTONOMOUS,
                     (Task("A", "A", Leg.AUTONOMOUS, 0, 1, 0),
                      Task("B", "B", Leg.AUTONOMOUS, 0, 1, 900)), 1, inst.network, inst.config)
    s = solve_exact(sub)
    doc = load_schedule_document(schedules_to_json([s]))
    bars = _bars(gantt_svg(doc))
    assert len(bars) == 3
    assert sorted(bars) == [("relocation", "#d62728"), ("task", "#1f5fbf"), ("task", "#1f5fbf")]


def test_gantt_golden(tmp_path):
    out = tmp_path / "g.svg"
    emit_gantt(DATA / "gantt_fixture.json", out)
    assert out.read_text() == (DATA / "gantt_golden.svg").read_text()
    assert emit_gantt(DATA / "gantt_fixture.json", out) == out.read_text()


def test_gantt_unknown_subproblem():
    doc = load_schedule_document((DATA / "gantt_fixture.json").read_text())
    with pytest.raises(SchemaError):
        gantt_svg(doc, "hub-99")


def test_route_svg():
    inst = hand_instance()
    res = run_instance(inst)
    doc = load_schedule_document(schedules_to_json(res.schedules))
    svg = route_svg(doc, inst, 0, "autonomous")
    assert svg.count('class="loaded"') == 2


# --- pipeline and CLI ------------------------------------------------------------

def test_six_task_pipeline_matches_oracle():
    inst = hand_instance(trucks=1)
    res = run_instance(inst, PipelineOptions(solver="exact"))
    assert res.selection.athn_count == 2
    assert sum(len(s.subproblem.tasks) for s in res.schedules) == 6
    total = sum(s.empty_cost for s in res.schedules)
    assert total > 0
    assert total == sum(brute_force_oracle(s.subproblem) for s in res.schedules)
    res_h = run_instance(inst, PipelineOptions(solver="heuristic", time_limit=2))
    assert sum(s.empty_cost for s in res_h.schedules) == total


def _write(tmp_path, inst, name="inst.json"):
    p = tmp_path / name
    p.write_text(instance_to_json(inst))
    return p


def test_cli_empty_orders(tmp_path, capsys):
    p = _write(tmp_path, hand_instance(orders=[]))
    out = tmp_path / "s.json"
    assert main(["solve", str(p), "-o", str(out), "--table", str(tmp_path / "t.txt")]) == 0
    assert json.loads(out.read_text())["subproblems"] == []
    assert re.search(r"Savings\s+0\s+\$\s+0\s+\$\s+0\n", (tmp_path / "t.txt").read_text())


def test_cli_solve_report_gantt_deterministic(tmp_path, capsys):
    p = _write(tmp_path, generate_instance(SyntheticSpec(order_count=40, seed=1)))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["--seed", "3", "--time-limit", "20", "--iterations", "300", "solve", str(p)]
    assert main(args + ["-o", str(a), "--csv", str(tmp_path / "t.csv")]) == 0
    first = capsys.readouterr().out
    assert main(args + ["-o", str(b)]) == 0
    assert capsys.readouterr().out == first
    assert a.read_bytes() == b.read_bytes()
    assert "autonomous empty-mile share" in first

    assert main(["report", str(p), str(a)]) == 0
    report = capsys.readouterr().out
    solve_table = first.split("autonomous empty-mile share")[0]
    assert report == solve_table

    svg = tmp_path / "g.svg"
    assert main(["gantt", str(a), "-o", str(svg)]) == 0
    assert svg.read_text().count('class="task"') > 0
    assert main(["gantt", str(a), "-o", str(svg), "--route-truck", "0",
                 "--instance", str(p)]) == 0


def test_cli_flags_after_verb(tmp_path, capsys):
    p = _write(tmp_path, hand_instance())
    assert main(["select", str(p), "--alpha", "0.3", "-o", str(tmp_path / "d.json")]) == 0
    assert "hub network: 2" in capsys.readouterr().out
    doc = json.loads((tmp_path / "d.json").read_text())
    assert [d["order"] for d in doc["decisions"]] == ["R1", "R2"]


def test_cli_infeasible_exit(tmp_path, capsys):
    # two long autonomous legs at the same moment, one truck, no flexibility
    inst = hand_instance(orders=[Order("R1", 2, 4, 0), Order("R2", 3, 5, 0)], flexibility=0,
                         hub_trucks=2)
    p = _write(tmp_path, inst)
    assert main(["solve", str(p), "-o", str(tmp_path / "s.json")]) == 1
    err = capsys.readouterr().err
    assert "infeasible subproblem autonomous" in err
    # a second truck resolves it
    assert main(["solve", str(p), "--trucks", "2", "-o", str(tmp_path / "s.json")]) == 0


def test_cli_input_errors(tmp_path, capsys):
    assert main(["solve", str(tmp_path / "missing.json"), "-o", str(tmp_path / "x")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["solve", str(bad), "-o", str(tmp_path / "x")]) == 2
    assert "schema_version" in capsys.readouterr().err
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_cli_generate_and_sweeps(tmp_path, capsys):
    p = tmp_path / "g.json"
    assert main(["--seed", "2", "generate", "-o", str(p), "--hubs", "5", "--orders", "8",
                 "--customers", "12"]) == 0
    assert len(instance_from_json(p.read_text()).orders) == 8
    assert main(["sweep-alpha", str(p), "--alphas", "0.25,0.4", "--solver", "exact",
                 "--csv"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0].startswith("alpha,automated_orders") and len(rows) == 3
    assert main(["sweep-delta", str(p), "--deltas", "30,60", "--solver", "exact"]) == 0
    assert "delta" in capsys.readouterr().out


def test_cli_ingest(tmp_path, capsys):
    from test_ingest import STOP_EXPORT

    (tmp_path / "stops.csv").write_text(STOP_EXPORT)
    zips = {"30303": 0, "37774": 250, "30009": 20, "31201": 90, "30100": 10, "37000": 240}
    rows = ["from,to,miles,minutes"]
    for a, xa in zips.items():
        for b, xb in zips.items():
            if a != b:
                rows.append(f"{a},{b},{abs(xa - xb)},{abs(xa - xb)}")
    (tmp_path / "matrix.csv").write_text("\n".join(rows) + "\n")
    (tmp_path / "access.csv").write_text("location,count\n30100,9\n37000,7\n30009,1\n")
    out = tmp_path / "inst.json"
    assert main(["ingest", str(tmp_path / "stops.csv"), "--matrix", str(tmp_path / "matrix.csv"),
                 "--access", str(tmp_path / "access.csv"), "-k", "2", "-o", str(out)]) == 0
    assert "2 orders, 1 kept, 2 hubs" in capsys.readouterr().out
    inst = instance_from_json(out.read_text())
    assert [loc.label for loc in inst.network.locations[:2]] == ["hub 30100", "hub 37000"]
    assert len(inst.orders) == 1 and inst.orders[0].id == "7366366"
