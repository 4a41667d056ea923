"""Canonical path-record and node-inventory file formats.

Trace files are UTF-8 CSV with the fixed header::

    path_id,cu_id,du_id,rx_power_dbm,aod_az_deg,aod_el_deg,aoa_az_deg,aoa_el_deg,delay_s,phase_deg

Phases are written in degrees and held in radians in memory. Node files use
``node_id,kind,x_m,y_m,z_m``.
"""

from collections import Counter
from dataclasses import dataclass, field
import csv
import io
import math

from ._geometry import SPEED_OF_LIGHT, dbm_to_watts, wrap_azimuth
from .exceptions import ReferentialIntegrityError, TraceFormatError
from .records import CU, DU, Node, PathRecord

__all__ = [
    "TRACE_HEADER",
    "NODE_HEADER",
    "RadioParams",
    "Scenario",
    "make_path_record",
    "parse_trace",
    "serialize_trace",
    "parse_nodes",
    "serialize_nodes",
    "path_gain_linear",
    "read_scenario",
]

TRACE_HEADER = (
    "path_id",
    "cu_id",
    "du_id",
    "rx_power_dbm",
    "aod_az_deg",
    "aod_el_deg",
    "aoa_az_deg",
    "aoa_el_deg",
    "delay_s",
    "phase_deg",
)
NODE_HEADER = ("node_id", "kind", "x_m", "y_m", "z_m")

TWO_PI = 2.0 * math.pi
THERMAL_NOISE_DBM_HZ = -174.0


@dataclass(frozen=True)
class RadioParams:
    """Link-level radio constants. Defaults are the 140 GHz midhaul setup."""

    carrier_hz: float = 140e9
    bandwidth_hz: float = 2e9
    tx_power_dbm: float = 43.0
    rate_target_bps: float = 10e9
    loss_factor: float = 0.15
    max_spectral_efficiency: float = 5.9
    noise_figure_db: float = 7.0
    noise_dbm: float | None = None

    def __post_init__(self):
        if not self.carrier_hz > 0:
            raise ValueError("carrier frequency must be positive")
        if not self.bandwidth_hz > 0:
            raise ValueError("bandwidth must be positive")
        if not 0.0 <= self.loss_factor < 1.0:
            raise ValueError("loss factor must lie in [0, 1)")
        if not self.max_spectral_efficiency > 0:
            raise ValueError("max spectral efficiency must be positive")

    @property
    def noise_power_dbm(self):
        if self.noise_dbm is not None:
            return float(self.noise_dbm)
        return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(self.bandwidth_hz) + self.noise_figure_db

    @property
    def noise_power_w(self):
        return dbm_to_watts(self.noise_power_dbm)

    @property
    def tx_power_w(self):
        return dbm_to_watts(self.tx_power_dbm)

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.carrier_hz

    @property
    def peak_rate_bps(self):
        return self.bandwidth_hz * (1.0 - self.loss_factor) * self.max_spectral_efficiency


@dataclass(frozen=True)
class Scenario:
    """Node inventory plus path set plus radio constants.

    Construction checks that every path references a known CU and DU and
    that no pair carries more than ``max_paths_per_pair`` paths.
    """

    nodes: tuple
    paths: tuple
    radio: RadioParams = field(default_factory=RadioParams)
    max_paths_per_pair: int = 25

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "paths", tuple(self.paths))
        ids = [n.id for n in self.nodes]
        dup = [k for k, c in Counter(ids).items() if c > 1]
        if dup:
            raise ValueError(f"duplicate node ids: {', '.join(sorted(dup))}")
        check_references(self.paths, self.nodes)
        counts = Counter(p.pair for p in self.paths)
        over = [pair for pair, c in counts.items() if c > self.max_paths_per_pair]
        if over:
            raise ValueError(
                f"{len(over)} CU-DU pairs exceed {self.max_paths_per_pair} paths, e.g. {over[0]}"
            )

    @property
    def cu_ids(self):
        return [n.id for n in self.nodes if n.kind == CU]

    @property
    def du_ids(self):
        return [n.id for n in self.nodes if n.kind == DU]

    def node(self, node_id):
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def paths_by_pair(self):
        out = {}
        for p in self.paths:
            out.setdefault(p.pair, []).append(p)
        return out

    def with_radio(self, radio):
        return Scenario(self.nodes, self.paths, radio, self.max_paths_per_pair)


def check_references(paths, nodes):
    cus = {n.id for n in nodes if n.kind == CU}
    dus = {n.id for n in nodes if n.kind == DU}
    for p in paths:
        if p.cu_id not in cus:
            raise ReferentialIntegrityError(f"path {p.path_id}: unknown CU id {p.cu_id!r}")
        if p.du_id not in dus:
            raise ReferentialIntegrityError(f"path {p.path_id}: unknown DU id {p.du_id!r}")


def make_path_record(path_id, cu_id, du_id, rx_power, aod_az, aod_el, aoa_az, aoa_el, delay, phase):
    """Validate and normalize fields into a :class:`PathRecord`.

    Azimuths are wrapped into [-180, 180) and the phase (radians) into
    [0, 2*pi). Elevations outside [0, 180] are rejected, not wrapped.
    """
    values = dict(rx_power=rx_power, aod_az=aod_az, aod_el=aod_el, aoa_az=aoa_az,
                  aoa_el=aoa_el, delay=delay, phase=phase)
    for name, v in values.items():
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")
    for name in ("aod_el", "aoa_el"):
        if not 0.0 <= values[name] <= 180.0:
            raise ValueError(f"{name} = {values[name]} outside [0, 180] degrees")
    if delay < 0:
        raise ValueError(f"delay must be >= 0, got {delay}")
    phase = math.fmod(phase, TWO_PI)
    if phase < 0:
        phase += TWO_PI
    if phase >= TWO_PI:
        phase = 0.0
    return PathRecord(
        int(path_id), str(cu_id), str(du_id), float(rx_power),
        wrap_azimuth(float(aod_az)), float(aod_el),
        wrap_azimuth(float(aoa_az)), float(aoa_el),
        float(delay), float(phase),
    )


def _as_text(source):
    if isinstance(source, str):
        return source
    if hasattr(source, "read"):
        return source.read()
    raise TypeError("expected a string or a text stream")


def _split_rows(text, header, what):
    rows = csv.reader(io.StringIO(text))
    first = next(rows, None)
    if first is None:
        raise TraceFormatError(f"empty {what} file, header missing", line=1)
    if tuple(c.strip() for c in first) != header:
        raise TraceFormatError(f"bad {what} header {','.join(first)!r}", line=1)
    for cells in rows:
        lineno = rows.line_num
        if not any(c.strip() for c in cells):
            continue
        if len(cells) != len(header):
            raise TraceFormatError(
                f"expected {len(header)} fields, got {len(cells)}", line=lineno
            )
        yield lineno, [c.strip() for c in cells]


def parse_trace(source, node_ids=None):
    """Parse a trace CSV (string or text stream) into a list of PathRecords.

    If ``node_ids`` is given (a mapping id -> kind, or an iterable of
    :class:`Node`), every cu_id/du_id is checked against it.
    """
    kinds = None
    if node_ids is not None:
        if isinstance(node_ids, dict):
            kinds = dict(node_ids)
        else:
            kinds = {n.id: n.kind for n in node_ids}

    records = []
    for lineno, cells in _split_rows(_as_text(source), TRACE_HEADER, "trace"):
        row = dict(zip(TRACE_HEADER, cells))
        try:
            path_id = int(row["path_id"])
        except ValueError:
            raise TraceFormatError(f"not an integer: {row['path_id']!r}", lineno, "path_id") from None
        for col in ("cu_id", "du_id"):
            if not row[col]:
                raise TraceFormatError("empty node id", lineno, col)
        nums = {}
        for col in TRACE_HEADER[3:]:
            try:
                nums[col] = float(row[col])
            except ValueError:
                raise TraceFormatError(f"not a number: {row[col]!r}", lineno, col) from None
            if not math.isfinite(nums[col]):
                raise TraceFormatError(f"non-finite value {row[col]!r}", lineno, col)
        for col in ("aod_el_deg", "aoa_el_deg"):
            if not 0.0 <= nums[col] <= 180.0:
                raise TraceFormatError(f"elevation {nums[col]} outside [0, 180]", lineno, col)
        if nums["delay_s"] < 0:
            raise TraceFormatError("negative delay", lineno, "delay_s")
        if kinds is not None:
            for col, kind in (("cu_id", CU), ("du_id", DU)):
                if kinds.get(row[col]) != kind:
                    raise ReferentialIntegrityError(
                        f"line {lineno}: {col} {row[col]!r} is not a known {kind}"
                    )
        records.append(
            make_path_record(
                path_id, row["cu_id"], row["du_id"], nums["rx_power_dbm"],
                nums["aod_az_deg"], nums["aod_el_deg"], nums["aoa_az_deg"], nums["aoa_el_deg"],
                nums["delay_s"], math.radians(nums["phase_deg"]),
            )
        )
    return records


def serialize_trace(records):
    """Render records as trace CSV text, one row per record, in input order."""
    out = io.StringIO()
    out.write(",".join(TRACE_HEADER) + "\n")
    for r in records:
        fields = (
            str(r.path_id), r.cu_id, r.du_id, repr(r.rx_power),
            repr(r.aod_az), repr(r.aod_el), repr(r.aoa_az), repr(r.aoa_el),
            repr(r.delay), repr(math.degrees(r.phase)),
        )
        out.write(",".join(fields) + "\n")
    return out.getvalue()


def parse_nodes(source):
    nodes = []
    seen = set()
    for lineno, cells in _split_rows(_as_text(source), NODE_HEADER, "node"):
        node_id, kind = cells[0], cells[1].upper()
        if not node_id:
            raise TraceFormatError("empty node id", lineno, "node_id")
        if node_id in seen:
            raise TraceFormatError(f"duplicate node id {node_id!r}", lineno, "node_id")
        if kind not in (CU, DU):
            raise TraceFormatError(f"kind must be CU or DU, got {cells[1]!r}", lineno, "kind")
        xyz = []
        for col, cell in zip(NODE_HEADER[2:], cells[2:]):
            try:
                xyz.append(float(cell))
            except ValueError:
                raise TraceFormatError(f"not a number: {cell!r}", lineno, col) from None
        if xyz[2] < 0:
            raise TraceFormatError("negative height", lineno, "z_m")
        seen.add(node_id)
        nodes.append(Node(node_id, kind, tuple(xyz)))
    return nodes


def serialize_nodes(nodes):
    lines = [",".join(NODE_HEADER)]
    for n in nodes:
        lines.append(",".join([n.id, n.kind] + [repr(c) for c in n.position]))
    return "\n".join(lines) + "\n"


def read_scenario(nodes_path, trace_path, radio=None, max_paths_per_pair=25):
    """Load a node file and a trace file into a validated Scenario."""
    with open(nodes_path, encoding="utf-8") as fh:
        nodes = parse_nodes(fh)
    with open(trace_path, encoding="utf-8") as fh:
        paths = parse_trace(fh, nodes)
    return Scenario(nodes, paths, radio or RadioParams(), max_paths_per_pair)


def path_gain_linear(record, tx_power_dbm):
    """Effective linear power gain of one path relative to isotropic antennas."""
    return 10.0 ** ((record.rx_power - tx_power_dbm) / 10.0)
