"""
Element pattern and array response
==================================

The element pattern is parabolic in dB with a 65 degree 3 dB beamwidth
and a 30 dB floor. A planar array multiplies it by the geometric phase
progression across its elements.
"""

import numpy as np

from midhaul.arrays import ArrayConfig, ArrayState, element_gain_db, steering_vector


def unit(az_deg, el_deg=90.0):
    az, el = np.radians(az_deg), np.radians(el_deg)
    return np.array([np.sin(el) * np.cos(az), np.sin(el) * np.sin(az), np.cos(el)])


# element gain across azimuth, in the array's own frame
print("azimuth  element gain")
for az in (0, 15, 32.5, 60, 90, 180):
    print(f"{az:>7}  {element_gain_db(unit(az)):6.2f} dBi")

###############################################################################
# Beam pattern of a 1x16 row steered to 20 degrees: weight with the
# conjugate of the steering vector toward the target and scan.
state = ArrayState(ArrayConfig(rows=1, cols=16), boresight=(1.0, 0.0, 0.0))
w = steering_vector(state, unit(20.0)).conj()
w /= np.linalg.norm(w)

scan = np.arange(-90, 91, 5)
power = [abs(steering_vector(state, unit(a)) @ w) ** 2 for a in scan]
peak = max(power)
print("\nscan   response")
for a, p in zip(scan, power):
    db = 10 * np.log10(p / peak) if p > 0 else -np.inf
    print(f"{a:>4}  {db:7.1f} dB  " + "#" * max(0, int(40 + db)))

###############################################################################
# Array gain: the norm of the steering vector toward boresight is
# sqrt(N * element gain).
for rows, cols in ((8, 8), (16, 8), (16, 16)):
    a = steering_vector(ArrayState(ArrayConfig(rows=rows, cols=cols)), unit(0.0))
    print(f"{rows}x{cols}: |a|^2 = {10 * np.log10(np.vdot(a, a).real):.2f} dB")
