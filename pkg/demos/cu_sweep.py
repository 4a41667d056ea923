"""
Adding CUs and growing arrays on the rooftop scene
==================================================

The bundled 8-CU / 36-DU scene: with one CU many midhaul links miss
10 Gbit/s, with three every link runs at the capped peak. Bigger arrays
help the fixed three-CU plan the same way. Takes a few seconds.
"""

from midhaul import bundled
from midhaul.arrays import ArrayConfig
from midhaul.planner import (
    PlannerSettings,
    associate,
    build_connectivity,
    evaluate_plan,
    greedy_order,
    plan_with_cu_count,
)

scenario = bundled.load_bundled("rooftops")
settings = PlannerSettings()

for k in (1, 2, 3):
    plan = plan_with_cu_count(scenario, k, settings)
    print(f"{k} CU ({', '.join(plan.selected)}): {plan.satisfied_count}/36 links at target, "
          f"min rate {plan.min_rate / 1e9:.2f} Gbit/s, unserved {list(plan.unserved)}")

###############################################################################
# Keep the three-CU association fixed and change only the array size.
graph = build_connectivity(scenario)
fixed = associate(greedy_order(graph)[:3], graph, scenario.radio.rate_target_bps)
for rows, cols in ((8, 8), (16, 8), (16, 16)):
    arr = ArrayConfig(rows=rows, cols=cols)
    plan = evaluate_plan(fixed, scenario, PlannerSettings(cu_array=arr, du_array=arr))
    print(f"{rows}x{cols}: {plan.satisfied_count}/36 links at target")
