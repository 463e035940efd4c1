"""
The base-case cost table
========================

Rebuild the weekly cost comparison between the current direct-trip network
and a hub network with driverless line-haul, from nothing but mileage.
"""

from fractions import Fraction

from athn.costing import build_cost_table
from athn.model import Config

# Loaded and empty miles of the current network, then of the autonomous
# trucks. First/last-mile empty miles are not given: they are estimated as a
# quarter of first/last-mile mileage.
table = build_cost_table(current=(96_669, 96_698), auto=(91_618, 44_217),
                         fl_loaded=29_286, config=Config())
print(table.to_text())

# Autonomous trucks are assumed to be 25% cheaper per mile. Savings are affine
# in that discount, so a few points make a large difference.
for pct in (25, 30, 35, 40):
    t = build_cost_table((96_669, 96_698), (91_618, 44_217), 29_286,
                         Config(alpha=Fraction(pct, 100)))
    print(f"discount {pct}%: saves ${float(t.savings_dollars):,.0f} ({t.savings_pct}%)")
