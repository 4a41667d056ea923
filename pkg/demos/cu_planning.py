"""
Choosing CUs for a small scene
==============================

Generate a 3x3-block city, trace paths between every rooftop pair, then
pick the fewest CUs whose links all reach 10 Gbit/s.
"""

from midhaul import bundled
from midhaul.planner import (
    PlannerSettings,
    build_connectivity,
    greedy_select,
    plan_minimum_cus,
)
from midhaul.report import plan_text

scenario = bundled.load_bundled("small")
print(f"{len(scenario.cu_ids)} CUs, {len(scenario.du_ids)} DUs, {len(scenario.paths)} paths")

###############################################################################
# The connectivity graph links a CU and a DU when some path exists
# between them. Greedy set cover picks the CU reaching most uncovered
# DUs first.
graph = build_connectivity(scenario)
for cu in graph.cus:
    print(f"{cu} reaches {', '.join(sorted(graph.covered_by(cu)))}")
print("greedy cover:", greedy_select(graph))

###############################################################################
# Covering every DU is not the same as serving it at the target rate.
# The greedy loop adds CUs until every link meets the target; the
# exhaustive search checks smaller subsets too.
settings = PlannerSettings()
for mode in ("greedy", "exhaustive"):
    plan = plan_minimum_cus(scenario, settings, mode)
    print(f"\n--- {mode} ---")
    print(plan_text(plan), end="")
