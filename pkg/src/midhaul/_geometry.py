"""Direction/angle conversions shared by the scene and array code.

Angles follow the ray-tracer convention: elevation is measured from the
zenith (0 deg points straight up, 180 deg straight down) and azimuth is
measured counter-clockwise from the +x axis, wrapped into [-180, 180).
"""

import math

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


def wrap_azimuth(az_deg):
    """Wrap an azimuth in degrees into [-180, 180)."""
    az = math.fmod(az_deg + 180.0, 360.0)
    if az < 0.0:
        az += 360.0
    az -= 180.0
    # fmod can land exactly on +180 after the shift for tiny negatives
    if az >= 180.0:
        az -= 360.0
    return az


def angles_to_vector(az_deg, el_deg):
    """Unit vector for (azimuth, zenith-elevation) in degrees."""
    az = math.radians(az_deg)
    el = math.radians(el_deg)
    s = math.sin(el)
    return np.array([s * math.cos(az), s * math.sin(az), math.cos(el)])


def vector_to_angles(v):
    """(azimuth, zenith-elevation) in degrees of a nonzero 3-vector.

    Vertical vectors get azimuth 0 by convention.
    """
    v = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("zero vector has no direction")
    x, y, z = v / norm
    el = math.degrees(math.acos(min(1.0, max(-1.0, z))))
    if math.hypot(x, y) < 1e-12:
        az = 0.0
    else:
        az = wrap_azimuth(math.degrees(math.atan2(y, x)))
    return az, el


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(x):
    """10*log10(x), returning -inf for x == 0 instead of warning."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(x)
    return float(out) if out.ndim == 0 else out


def dbm_to_watts(dbm):
    return 10.0 ** ((dbm - 30.0) / 10.0)
