"""Synthetic urban deployment: box buildings, rooftop CU/DU sites, and a
free-space multipath generator standing in for a full ray tracer.

Buildings are axis-aligned boxes on a jittered grid. CUs go on the tallest
roofs, DUs on lower ones. Paths are the direct ray (when unobstructed) plus
optional single-bounce specular reflections off vertical walls.
"""

from dataclasses import dataclass, fields
import io
import math

import numpy as np

from ._geometry import SPEED_OF_LIGHT, vector_to_angles
from .exceptions import SceneCapacityError
from .records import CU, DU, Node
from .trace_io import make_path_record

__all__ = [
    "Building",
    "SceneConfig",
    "PropagationConfig",
    "generate_scene",
    "line_of_sight",
    "host_building",
    "free_space_loss_db",
    "synthesize_paths",
    "write_scene",
    "read_scene",
]

_BOX_EPS = 1e-6


@dataclass(frozen=True)
class Building:
    x_min: float
    y_min: float
    x_max: float
    y_max: float
    height: float

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("building footprint must have positive area")
        if not self.height > 0:
            raise ValueError("building height must be positive")

    @property
    def center(self):
        return (0.5 * (self.x_min + self.x_max), 0.5 * (self.y_min + self.y_max))

    def walls(self):
        """Vertical walls as (axis, plane coordinate, outward sign)."""
        return ((0, self.x_min, -1.0), (0, self.x_max, 1.0),
                (1, self.y_min, -1.0), (1, self.y_max, 1.0))


@dataclass(frozen=True)
class SceneConfig:
    """Knobs for :func:`generate_scene`.

    ``grid`` is the number of building cells along x and y; each cell holds
    one building whose side lengths are drawn from ``footprint_range`` and
    whose height from ``height_range``. Every node sits ``mast_height``
    meters above the center of its roof; CU roofs are raised by
    ``cu_height_boost``.
    """

    area: float = 500.0
    grid: tuple = (7, 7)
    height_range: tuple = (10.0, 40.0)
    footprint_range: tuple = (20.0, 40.0)
    cu_count: int = 8
    du_count: int = 36
    mast_height: float = 3.0
    cu_height_boost: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(int(g) for g in self.grid))
        object.__setattr__(self, "height_range", tuple(float(h) for h in self.height_range))
        object.__setattr__(self, "footprint_range", tuple(float(f) for f in self.footprint_range))
        if self.cu_count < 1 or self.du_count < 1:
            raise ValueError("need at least one CU and one DU")
        if self.area <= 0 or min(self.grid) < 1:
            raise ValueError("area and grid dimensions must be positive")
        lo, hi = self.height_range
        if not 0 < lo <= hi:
            raise ValueError("height range must satisfy 0 < low <= high")
        flo, fhi = self.footprint_range
        if not 0 < flo <= fhi:
            raise ValueError("footprint range must satisfy 0 < low <= high")
        if fhi > self.area / max(self.grid):
            raise ValueError("footprints larger than grid cells")
        if self.mast_height < 0 or self.cu_height_boost < 0:
            raise ValueError("mast height and CU boost must be >= 0")


@dataclass(frozen=True)
class PropagationConfig:
    """Synthetic propagation model settings (absorption in dB per meter)."""

    absorption_db_per_m: float = 0.0015
    reflections: bool = True
    reflection_loss_db: float = 10.0
    max_paths: int = 25
    # antennas sit on the roof edge facing the link, so a node's own
    # building never blocks or reflects that node's paths
    host_transparent: bool = True


def generate_scene(config):
    """Build the buildings and rooftop nodes for ``config``.

    Returns ``(buildings, nodes)``. CUs occupy the ``cu_count`` tallest
    buildings; DUs are drawn at random from the rest. Node ids are
    numbered in grid order (CU1.., DU1..).
    """
    nx, ny = config.grid
    n_buildings = nx * ny
    if config.cu_count + config.du_count > n_buildings:
        raise SceneCapacityError(
            f"{config.cu_count} CUs + {config.du_count} DUs requested but only "
            f"{n_buildings} rooftops available"
        )
    rng = np.random.default_rng(config.seed)
    cell_x = config.area / nx
    cell_y = config.area / ny
    buildings = []
    for j in range(ny):
        for i in range(nx):
            w, d = rng.uniform(*config.footprint_range, size=2)
            x0 = i * cell_x + rng.uniform(0.0, cell_x - w)
            y0 = j * cell_y + rng.uniform(0.0, cell_y - d)
            h = rng.uniform(*config.height_range)
            buildings.append([x0, y0, x0 + w, y0 + d, h])

    heights = np.array([b[4] for b in buildings])
    order = np.argsort(-heights, kind="stable")
    cu_idx = set(order[: config.cu_count].tolist())
    if config.cu_count < n_buildings:
        rest = order[config.cu_count:]
        if heights[order[config.cu_count - 1]] <= heights[rest[0]]:
            raise SceneCapacityError("tied building heights leave no strictly taller CU rooftops")
    rest = np.sort(order[config.cu_count:])
    du_idx = set(rng.choice(rest, size=config.du_count, replace=False).tolist())
    for k in cu_idx:
        buildings[k][4] += config.cu_height_boost

    buildings = [Building(*map(float, b)) for b in buildings]
    nodes = []
    n_cu = n_du = 0
    for k, b in enumerate(buildings):
        cx, cy = b.center
        z = b.height + config.mast_height
        if k in cu_idx:
            n_cu += 1
            nodes.append(Node(f"CU{n_cu}", CU, (cx, cy, z)))
        elif k in du_idx:
            n_du += 1
            nodes.append(Node(f"DU{n_du}", DU, (cx, cy, z)))
    nodes.sort(key=lambda n: (n.kind, int(n.id[2:])))
    return buildings, nodes


def _box_arrays(buildings):
    if not buildings:
        return np.zeros((0, 3)), np.zeros((0, 3))
    lo = np.array([[b.x_min, b.y_min, 0.0] for b in buildings]) + _BOX_EPS
    hi = np.array([[b.x_max, b.y_max, b.height] for b in buildings]) - _BOX_EPS
    return lo, hi


def _segment_blocked(a, b, lo, hi):
    """Slab test of segment a->b against boxes [lo, hi] (vectorized)."""
    if lo.shape[0] == 0:
        return False
    d = b - a
    t0 = np.zeros(lo.shape[0])
    t1 = np.ones(lo.shape[0])
    for ax in range(3):
        if abs(d[ax]) < 1e-15:
            outside = (a[ax] <= lo[:, ax]) | (a[ax] >= hi[:, ax])
            t1 = np.where(outside, -1.0, t1)
            continue
        ta = (lo[:, ax] - a[ax]) / d[ax]
        tb = (hi[:, ax] - a[ax]) / d[ax]
        t0 = np.maximum(t0, np.minimum(ta, tb))
        t1 = np.minimum(t1, np.maximum(ta, tb))
    return bool(np.any(t1 > t0))


def line_of_sight(a, b, buildings):
    """True when the open segment a-b passes through no building volume.

    Boxes are shrunk by a micrometer so points lying on a roof or wall
    (e.g. a node sitting on its own rooftop) are not treated as blocked.
    """
    lo, hi = _box_arrays(buildings)
    return not _segment_blocked(np.asarray(a, float), np.asarray(b, float), lo, hi)


def free_space_loss_db(distance, carrier_hz):
    wavelength = SPEED_OF_LIGHT / carrier_hz
    return 20.0 * math.log10(4.0 * math.pi * distance / wavelength)


def _path_fields(first_hop, last_hop, length, extra_loss_db, extra_phase, radio, prop):
    loss = free_space_loss_db(length, radio.carrier_hz) + prop.absorption_db_per_m * length + extra_loss_db
    wavelength = SPEED_OF_LIGHT / radio.carrier_hz
    aod_az, aod_el = vector_to_angles(first_hop)
    # arrival direction points from the DU back toward where the wave comes from
    aoa_az, aoa_el = vector_to_angles(-last_hop)
    phase = -2.0 * math.pi * length / wavelength + extra_phase
    return dict(
        rx_power=radio.tx_power_dbm - loss,
        aod_az=aod_az, aod_el=aod_el, aoa_az=aoa_az, aoa_el=aoa_el,
        delay=length / SPEED_OF_LIGHT,
        phase=phase,
    )


def _reflections(cu, du, buildings, boxes_cu, boxes_du, skip):
    """Yield (bounce point, total length) for each valid single-wall bounce."""
    for k, b in enumerate(buildings):
        if k in skip:
            continue
        for axis, plane, sign in b.walls():
            if (cu[axis] - plane) * sign <= 0 or (du[axis] - plane) * sign <= 0:
                continue
            image = cu.copy()
            image[axis] = 2.0 * plane - cu[axis]
            t = (plane - image[axis]) / (du[axis] - image[axis])
            p = image + t * (du - image)
            other = 1 - axis
            span = (b.y_min, b.y_max) if axis == 0 else (b.x_min, b.x_max)
            if not (span[0] <= p[other] <= span[1] and 0.0 <= p[2] <= b.height):
                continue
            if _segment_blocked(cu, p, *boxes_cu) or _segment_blocked(p, du, *boxes_du):
                continue
            yield p, float(np.linalg.norm(du - image))


def host_building(node, buildings):
    """Index of the building whose roof the node stands on, or None."""
    x, y, z = node.position
    for k, b in enumerate(buildings):
        if b.x_min <= x <= b.x_max and b.y_min <= y <= b.y_max and b.height <= z + 1e-9:
            return k
    return None


def synthesize_paths(buildings, nodes, radio, propagation=None, first_path_id=1):
    """Generate PathRecords for every CU-DU pair.

    Gains follow Friis free-space loss plus linear atmospheric absorption;
    each reflected path also pays ``reflection_loss_db`` and a pi phase
    flip. Per pair, only the ``max_paths`` strongest paths are kept. Pairs
    with no direct ray and no valid bounce produce no records.
    """
    prop = propagation or PropagationConfig()
    if not radio.carrier_hz > 0:
        raise ValueError("carrier frequency must be positive")
    lo, hi = _box_arrays(buildings)
    cus = [n for n in nodes if n.kind == CU]
    dus = [n for n in nodes if n.kind == DU]
    hosts = {n.id: host_building(n, buildings) if prop.host_transparent else None for n in nodes}

    def boxes(*exclude):
        keep = np.ones(len(buildings), dtype=bool)
        for k in exclude:
            if k is not None:
                keep[k] = False
        return lo[keep], hi[keep]

    records = []
    path_id = first_path_id
    for cu in cus:
        a = cu.xyz
        hc = hosts[cu.id]
        boxes_cu = boxes(hc)
        for du in dus:
            b = du.xyz
            hd = hosts[du.id]
            candidates = []
            if not _segment_blocked(a, b, *boxes(hc, hd)):
                d = b - a
                candidates.append(_path_fields(d, d, float(np.linalg.norm(d)), 0.0, 0.0, radio, prop))
            if prop.reflections:
                skip = {hc, hd} - {None}
                for p, length in _reflections(a, b, buildings, boxes_cu, boxes(hd), skip):
                    candidates.append(
                        _path_fields(p - a, b - p, length, prop.reflection_loss_db, math.pi, radio, prop)
                    )
            candidates.sort(key=lambda c: -c["rx_power"])
            for c in candidates[: prop.max_paths]:
                records.append(make_path_record(path_id, cu.id, du.id, **c))
                path_id += 1
    return records


_SCENE_KEYS = {f.name: f for f in fields(SceneConfig)}
_BUILDING_HEADER = "x_min,y_min,x_max,y_max,height"


def write_scene(config, buildings):
    """Render a scene as ``key = value`` lines followed by a building table."""
    out = io.StringIO()
    out.write("# midhaul scene description\n")
    for name in _SCENE_KEYS:
        value = getattr(config, name)
        if isinstance(value, tuple):
            value = ",".join(repr(v) for v in value)
        out.write(f"{name} = {value}\n")
    out.write("\n[buildings]\n")
    out.write(_BUILDING_HEADER + "\n")
    for b in buildings:
        out.write(f"{b.x_min!r},{b.y_min!r},{b.x_max!r},{b.y_max!r},{b.height!r}\n")
    return out.getvalue()


def read_scene(source):
    """Parse text produced by :func:`write_scene`; returns (config, buildings)."""
    text = source if isinstance(source, str) else source.read()
    kv = {}
    buildings = []
    in_table = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[buildings]":
            in_table = True
            continue
        if in_table:
            if line == _BUILDING_HEADER:
                continue
            try:
                buildings.append(Building(*(float(c) for c in line.split(","))))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"scene line {lineno}: bad building row: {exc}") from None
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in _SCENE_KEYS:
            raise ValueError(f"scene line {lineno}: unknown entry {raw!r}")
        kv[key] = value.strip()

    def conv(name, value):
        if name in ("grid",):
            return tuple(int(v) for v in value.split(","))
        if name in ("height_range", "footprint_range"):
            return tuple(float(v) for v in value.split(","))
        if name in ("cu_count", "du_count", "seed"):
            return int(value)
        return float(value)

    config = SceneConfig(**{k: conv(k, v) for k, v in kv.items()})
    return config, buildings
