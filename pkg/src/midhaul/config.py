"""Flat ``key = value`` run configuration.

One setting per line, ``#`` starts a comment. Recognized keys:

radio
    carrier_hz, bandwidth_hz, tx_power_dbm, rate_target_bps, loss_factor,
    max_spectral_efficiency, noise_figure_db, noise_dbm
arrays (both ends; prefix with ``cu_`` or ``du_`` to set one side only)
    rows, cols, spacing, beamwidth_h_deg, beamwidth_v_deg,
    max_attenuation_db, max_gain_dbi
planner
    mode (greedy | exhaustive), precoder (slnr | zf), threshold_dbm,
    inter_cu_interference
scene generation
    area, grid, height_range, footprint_range, cu_count, du_count,
    mast_height, cu_height_boost, seed
propagation
    absorption_db_per_m, reflections, reflection_loss_db, max_paths
sweeps
    cu_counts (e.g. ``1,2,3``), array_sizes (e.g. ``8x8,16x8,16x16``), sweep_cus
inputs (relative paths resolve against the config file's directory)
    nodes, trace, scene
"""

from dataclasses import dataclass, field, fields, replace
import math
from pathlib import Path

from .arrays import ArrayConfig
from .planner import PlannerSettings
from .scene import PropagationConfig, SceneConfig
from .trace_io import RadioParams

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config", "parse_array_size"]


class ConfigError(ValueError):
    pass


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _float(text):
    return float(text)


def _int_list(text):
    out = [int(v) for v in text.split(",") if v.strip()]
    if not out:
        raise ValueError("empty list")
    return tuple(out)


def parse_array_size(text):
    """``"16x8"`` -> (16, 8)."""
    rows, sep, cols = text.strip().lower().partition("x")
    if not sep:
        raise ValueError(f"array size must look like ROWSxCOLS, got {text!r}")
    return int(rows), int(cols)


def _array_sizes(text):
    out = tuple(parse_array_size(v) for v in text.split(",") if v.strip())
    if not out:
        raise ValueError("empty list")
    return out


_ARRAY_KEYS = {f.name: (int if f.name in ("rows", "cols") else _float) for f in fields(ArrayConfig)}
_RADIO_KEYS = {f.name: _float for f in fields(RadioParams)}
_SCENE_KEYS = {
    "area": _float, "grid": _int_list,
    "height_range": lambda t: tuple(_float(v) for v in t.split(",")),
    "footprint_range": lambda t: tuple(_float(v) for v in t.split(",")),
    "cu_count": int, "du_count": int, "mast_height": _float, "cu_height_boost": _float,
    "seed": int,
}
_PROP_KEYS = {"absorption_db_per_m": _float, "reflections": _bool,
              "reflection_loss_db": _float, "max_paths": int}
_PLANNER_KEYS = {"mode": str, "precoder": str, "threshold_dbm": _float,
                 "inter_cu_interference": _bool}
_SWEEP_KEYS = {"cu_counts": _int_list, "array_sizes": _array_sizes, "sweep_cus": int}
_PATH_KEYS = {"nodes": str, "trace": str, "scene": str}


@dataclass(frozen=True)
class RunConfig:
    """Everything a CLI run needs, with the 140 GHz defaults."""

    radio: RadioParams = field(default_factory=RadioParams)
    cu_array: ArrayConfig = field(default_factory=ArrayConfig)
    du_array: ArrayConfig = field(default_factory=ArrayConfig)
    mode: str = "greedy"
    precoder: str = "slnr"
    threshold_dbm: float = -math.inf
    inter_cu_interference: bool = False
    scene: SceneConfig = field(default_factory=SceneConfig)
    propagation: PropagationConfig = field(default_factory=PropagationConfig)
    cu_counts: tuple = (1, 2, 3)
    array_sizes: tuple = ((8, 8), (16, 8), (16, 16))
    sweep_cus: int = 3
    nodes: Path | None = None
    trace: Path | None = None
    scene_file: Path | None = None

    def __post_init__(self):
        if self.mode not in ("greedy", "exhaustive"):
            raise ConfigError(f"mode must be greedy or exhaustive, got {self.mode!r}")
        if self.precoder not in ("slnr", "zf"):
            raise ConfigError(f"precoder must be slnr or zf, got {self.precoder!r}")
        if not self.cu_counts or not self.array_sizes:
            raise ConfigError("sweep lists must be nonempty")
        if any(k < 1 for k in self.cu_counts) or self.sweep_cus < 1:
            raise ConfigError("CU counts must be >= 1")

    def planner_settings(self):
        return PlannerSettings(self.cu_array, self.du_array, self.precoder,
                               self.threshold_dbm, self.inter_cu_interference)


def parse_config(text, base_dir=None):
    """Parse config text into a :class:`RunConfig`; raises ConfigError."""
    groups = {"radio": {}, "array": {}, "cu_array": {}, "du_array": {}, "scene": {},
              "prop": {}, "top": {}, "paths": {}}
    tables = (
        ("radio", _RADIO_KEYS), ("scene", _SCENE_KEYS), ("prop", _PROP_KEYS),
        ("top", _PLANNER_KEYS), ("top", _SWEEP_KEYS), ("paths", _PATH_KEYS),
    )
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not value:
            raise ConfigError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        try:
            for group, table in tables:
                if key in table:
                    groups[group][key] = table[key](value)
                    break
            else:
                side, _, bare = key.partition("_")
                if key in _ARRAY_KEYS:
                    groups["array"][key] = _ARRAY_KEYS[key](value)
                elif side in ("cu", "du") and bare in _ARRAY_KEYS:
                    groups[f"{side}_array"][bare] = _ARRAY_KEYS[bare](value)
                else:
                    raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"config line {lineno}: bad value for {key!r}: {exc}") from None

    base = Path(base_dir) if base_dir is not None else Path(".")
    try:
        radio = RadioParams(**groups["radio"])
        cu_array = ArrayConfig(**{**groups["array"], **groups["cu_array"]})
        du_array = ArrayConfig(**{**groups["array"], **groups["du_array"]})
        scene = SceneConfig(**groups["scene"])
        prop = PropagationConfig(**groups["prop"])
        paths = {k: base / v for k, v in groups["paths"].items()}
        return RunConfig(
            radio=radio, cu_array=cu_array, du_array=du_array, scene=scene, propagation=prop,
            nodes=paths.get("nodes"), trace=paths.get("trace"), scene_file=paths.get("scene"),
            **groups["top"],
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load_config(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FileNotFoundError(f"cannot read config file {path}: {exc.strerror}") from None
    return parse_config(text, base_dir=path.parent)


def with_overrides(config, **changes):
    """Copy of ``config`` with non-None keyword overrides applied."""
    changes = {k: v for k, v in changes.items() if v is not None}
    try:
        return replace(config, **changes)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
