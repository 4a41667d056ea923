"""Uniform planar arrays with a parabolic-in-dB element pattern.

Array-local frame: x' is boresight, z' is the (orthogonalized) up vector,
y' = z' x x'. Elements lie in the y'z' plane; rows run along z', columns
along y', and the element index is ``row * cols + col``. Positions are
centered on the array origin.
"""

from dataclasses import dataclass, field

import numpy as np

from ._geometry import SPEED_OF_LIGHT
from .exceptions import DegenerateAlignmentError

__all__ = [
    "ArrayConfig",
    "ArrayState",
    "element_gain_db",
    "steering_vector",
    "steering_vectors",
    "strongest_path",
    "align_du",
    "align_cu",
]

_Z = np.array([0.0, 0.0, 1.0])
_X = np.array([1.0, 0.0, 0.0])


@dataclass(frozen=True)
class ArrayConfig:
    rows: int = 16
    cols: int = 16
    spacing: float = 0.5  # wavelengths
    beamwidth_h_deg: float = 65.0
    beamwidth_v_deg: float = 65.0
    max_attenuation_db: float = 30.0
    max_gain_dbi: float = 8.0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("array needs at least one row and one column")
        if not self.spacing > 0:
            raise ValueError("element spacing must be positive")
        if self.beamwidth_h_deg <= 0 or self.beamwidth_v_deg <= 0:
            raise ValueError("beamwidths must be positive")

    @property
    def size(self):
        return self.rows * self.cols

    def element_positions(self):
        """(size, 3) element offsets in wavelengths, local frame, row-major."""
        r = np.arange(self.rows) - 0.5 * (self.rows - 1)
        c = np.arange(self.cols) - 0.5 * (self.cols - 1)
        rr, cc = np.meshgrid(r, c, indexing="ij")
        pos = np.zeros((self.size, 3))
        pos[:, 1] = cc.ravel() * self.spacing
        pos[:, 2] = rr.ravel() * self.spacing
        return pos


def _unit(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if not n > 0:
        raise ValueError("direction must be nonzero")
    return v / n


@dataclass(frozen=True)
class ArrayState:
    """An oriented array. ``up`` fixes roll; it is re-orthogonalized against
    the boresight, falling back to global x when nearly parallel to it."""

    config: ArrayConfig = field(default_factory=ArrayConfig)
    boresight: tuple = (1.0, 0.0, 0.0)
    up: tuple = (0.0, 0.0, 1.0)

    def __post_init__(self):
        b = _unit(self.boresight)
        u = np.asarray(self.up, dtype=float)
        u = u - np.dot(u, b) * b
        if np.linalg.norm(u) < 1e-6:
            u = _X - np.dot(_X, b) * b
        u = _unit(u)
        object.__setattr__(self, "boresight", tuple(b))
        object.__setattr__(self, "up", tuple(u))

    def rotation(self):
        """Rows are the local axes x', y', z' in global coordinates."""
        b = np.array(self.boresight)
        u = np.array(self.up)
        return np.vstack([b, np.cross(u, b), u])

    def to_local(self, directions):
        return np.asarray(directions, dtype=float) @ self.rotation().T


def element_gain_db(direction, config=None):
    """Element gain (dBi) toward a unit direction given in the array frame.

    Works on a single 3-vector or an (n, 3) stack.
    """
    cfg = config or ArrayConfig()
    d = np.asarray(direction, dtype=float)
    z = np.clip(d[..., 2], -1.0, 1.0)
    theta = np.degrees(np.arccos(z))
    # azimuth is undefined along the z' axis; take 0 there as for vertical paths
    polar = np.hypot(d[..., 0], d[..., 1]) < 1e-12
    phi = np.where(polar, 0.0, np.degrees(np.arctan2(d[..., 1], d[..., 0])))
    a_max = cfg.max_attenuation_db
    att_v = np.minimum(12.0 * ((theta - 90.0) / cfg.beamwidth_v_deg) ** 2, a_max)
    att_h = np.minimum(12.0 * (phi / cfg.beamwidth_h_deg) ** 2, a_max)
    g = cfg.max_gain_dbi - np.minimum(att_v + att_h, a_max)
    return float(g) if g.ndim == 0 else g


def steering_vectors(state, directions, carrier_hz=140e9):
    """Spatial signatures for an (n, 3) stack of global unit directions.

    Returns an (n, rows*cols) complex array. Element spacing is expressed
    in wavelengths, so ``carrier_hz`` only matters through the conversion
    of positions to meters and back.
    """
    cfg = state.config
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    local = state.to_local(dirs)
    amp = np.sqrt(10.0 ** (element_gain_db(local, cfg) / 10.0))
    wavelength = SPEED_OF_LIGHT / carrier_hz
    pos_m = cfg.element_positions() * wavelength
    k = 2.0 * np.pi / wavelength
    phase = k * (local @ pos_m.T)
    return amp[:, None] * np.exp(1j * phase)


def steering_vector(state, direction, carrier_hz=140e9):
    """Spatial signature of one global unit direction, length rows*cols."""
    return steering_vectors(state, np.asarray(direction, dtype=float)[None, :], carrier_hz)[0]


def strongest_path(paths):
    """Max rx_power, ties to the lowest path_id."""
    if not paths:
        raise ValueError("no paths")
    return min(paths, key=lambda p: (-p.rx_power, p.path_id))


def align_du(paths, config=None):
    """Point a DU array at the arrival direction of its strongest path."""
    if not paths:
        raise ValueError("cannot align a DU without paths")
    best = strongest_path(paths)
    return ArrayState(config or ArrayConfig(), tuple(best.aoa))


def align_cu(paths_by_du, config=None):
    """Point a CU array along the mean departure direction of its DUs.

    ``paths_by_du`` maps each connected DU to its paths from this CU; the
    strongest path of each DU contributes one unit vector to the mean.
    """
    if not paths_by_du:
        raise ValueError("cannot align a CU with no connected DUs")
    total = np.zeros(3)
    for du in sorted(paths_by_du):
        total += strongest_path(paths_by_du[du]).aod
    norm = np.linalg.norm(total)
    if norm < 1e-9:
        raise DegenerateAlignmentError(
            "departure directions cancel out; set the CU boresight manually"
        )
    return ArrayState(config or ArrayConfig(), tuple(total / norm))
