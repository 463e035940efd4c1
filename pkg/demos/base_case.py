"""
A desk-scale base case
======================

Generate a synthetic week of 494 long-haul orders on a 17-hub network, run
the whole pipeline and draw the autonomous fleet's Gantt chart.
Takes well under a minute on one core.
"""

from pathlib import Path

from athn.gantt import gantt_svg
from athn.generator import SyntheticSpec, generate_instance
from athn.io import load_schedule_document, schedules_to_json
from athn.pipeline import PipelineOptions, run_instance

inst = generate_instance(SyntheticSpec(seed=0))
print(len(inst.orders), "orders,", len(inst.network.hubs), "hubs,",
      inst.fleet.autonomous_count, "autonomous trucks")

result = run_instance(inst, PipelineOptions(time_limit=300, seed=0))
print(result.selection.athn_count, "orders use the hub network")
print(result.cost_table.to_text())
print(f"autonomous empty-mile share: {result.autonomous_empty_share:.1%}")

# Blue bars are tasks, red bars are empty relocations between them.
doc = load_schedule_document(schedules_to_json(result.schedules))
Path("base_case_gantt.svg").write_text(gantt_svg(doc, "autonomous"))
print("wrote base_case_gantt.svg")
