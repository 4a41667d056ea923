"""Plain record types shared across the package."""

from dataclasses import dataclass
import math

import numpy as np

from ._geometry import angles_to_vector

CU = "CU"
DU = "DU"


@dataclass(frozen=True)
class Node:
    """A CU or DU site; ``position`` is (x, y, z) in meters."""

    id: str
    kind: str
    position: tuple

    def __post_init__(self):
        if self.kind not in (CU, DU):
            raise ValueError(f"node {self.id!r}: kind must be CU or DU, got {self.kind!r}")
        pos = tuple(float(p) for p in self.position)
        if len(pos) != 3 or not all(math.isfinite(p) for p in pos):
            raise ValueError(f"node {self.id!r}: position must be three finite numbers")
        if pos[2] < 0:
            raise ValueError(f"node {self.id!r}: height z must be >= 0")
        object.__setattr__(self, "position", pos)

    @property
    def xyz(self):
        return np.array(self.position)


@dataclass(frozen=True)
class PathRecord:
    """One propagation path between a CU and a DU.

    Angles are in degrees (elevation from zenith), ``delay`` in seconds,
    ``phase`` in radians within [0, 2*pi). ``rx_power`` is the power in dBm
    that an isotropic receiver would see with isotropic transmission.
    """

    path_id: int
    cu_id: str
    du_id: str
    rx_power: float
    aod_az: float
    aod_el: float
    aoa_az: float
    aoa_el: float
    delay: float
    phase: float

    @property
    def aod(self):
        """Unit departure vector at the CU, global frame."""
        return angles_to_vector(self.aod_az, self.aod_el)

    @property
    def aoa(self):
        """Unit vector at the DU pointing back along the arriving wave."""
        return angles_to_vector(self.aoa_az, self.aoa_el)

    @property
    def pair(self):
        return (self.cu_id, self.du_id)
