"""Synthetic scenes shipped with the package.

``rooftops``
    8 CUs and 36 DUs over 500 m x 500 m; CU roofs raised 30 m. One CU
    leaves many links short of 10 Gbit/s, three CUs carry all of them.
``small``
    3 CUs and 6 DUs, handy for quick runs and examples.

The files under ``data/<name>/`` are exactly what ``generate-scene``
writes for these configs; :func:`regenerate` rebuilds them.
"""

from importlib import resources
from pathlib import Path

from .scene import PropagationConfig, SceneConfig, generate_scene, synthesize_paths, write_scene
from .trace_io import RadioParams, read_scenario, serialize_nodes, serialize_trace

__all__ = ["BUNDLED", "bundled_dir", "load_bundled", "write_scene_files", "regenerate"]

BUNDLED = {
    "rooftops": SceneConfig(seed=23, cu_height_boost=30.0),
    "small": SceneConfig(area=240.0, grid=(3, 3), cu_count=3, du_count=6,
                         cu_height_boost=10.0, seed=11),
}

SCENE_FILE = "scene.txt"
NODES_FILE = "nodes.csv"
TRACE_FILE = "trace.csv"


def bundled_dir(name):
    if name not in BUNDLED:
        raise KeyError(f"no bundled scene {name!r}; choose from {', '.join(sorted(BUNDLED))}")
    return Path(str(resources.files("midhaul") / "data" / name))


def load_bundled(name, radio=None):
    d = bundled_dir(name)
    return read_scenario(d / NODES_FILE, d / TRACE_FILE, radio or RadioParams())


def write_scene_files(out_dir, config, radio=None, propagation=None):
    """Generate a scene and write scene.txt, nodes.csv and trace.csv."""
    radio = radio or RadioParams()
    buildings, nodes = generate_scene(config)
    paths = synthesize_paths(buildings, nodes, radio, propagation or PropagationConfig())
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / SCENE_FILE).write_text(write_scene(config, buildings), encoding="utf-8")
    (out / NODES_FILE).write_text(serialize_nodes(nodes), encoding="utf-8")
    (out / TRACE_FILE).write_text(serialize_trace(paths), encoding="utf-8")
    return buildings, nodes, paths


def regenerate(name, out_dir=None):
    return write_scene_files(out_dir or bundled_dir(name), BUNDLED[name])
