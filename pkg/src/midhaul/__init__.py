"""Planning toolkit for 140 GHz CU-DU midhaul links.

Typical flow::

    from midhaul import scene, planner
    buildings, nodes = scene.generate_scene(scene.SceneConfig(seed=1))
    paths = scene.synthesize_paths(buildings, nodes, RadioParams())
    plan = planner.plan_minimum_cus(Scenario(nodes, paths))
"""

from .arrays import ArrayConfig, ArrayState
from .exceptions import MidhaulError
from .planner import AssociationPlan, PlannerSettings, plan_minimum_cus
from .records import Node, PathRecord
from .scene import SceneConfig, generate_scene, synthesize_paths
from .trace_io import RadioParams, Scenario

__version__ = "0.1.0"

__all__ = [
    "ArrayConfig",
    "ArrayState",
    "AssociationPlan",
    "MidhaulError",
    "Node",
    "PathRecord",
    "PlannerSettings",
    "RadioParams",
    "Scenario",
    "SceneConfig",
    "generate_scene",
    "plan_minimum_cus",
    "synthesize_paths",
]
