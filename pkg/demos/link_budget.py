"""
Link budget at 140 GHz
======================

Free-space loss, absorption and the capped Shannon rate for one
rooftop-to-rooftop hop, using the default radio constants.
"""

import math

from midhaul.mimo import cap_sinr_threshold, link_rate
from midhaul.records import Node
from midhaul.scene import PropagationConfig, free_space_loss_db, synthesize_paths
from midhaul.trace_io import RadioParams

radio = RadioParams()
print(f"wavelength      {radio.wavelength * 1e3:.3f} mm")
print(f"noise power     {radio.noise_power_dbm:.2f} dBm over {radio.bandwidth_hz / 1e9:g} GHz")

# Friis loss grows 6 dB per doubling of distance
for d in (50, 100, 200, 400):
    print(f"FSPL {d:>4} m     {free_space_loss_db(d, radio.carrier_hz):.2f} dB")

###############################################################################
# A single line-of-sight path between two masts 150 m apart. The trace
# record carries received power, departure/arrival angles, delay and phase.
cu = Node("CU1", "CU", (0.0, 0.0, 45.0))
du = Node("DU1", "DU", (150.0, 0.0, 20.0))
(path,) = synthesize_paths([], [cu, du], radio, PropagationConfig())
print(f"\nrx power        {path.rx_power:.2f} dBm")
print(f"departure       az {path.aod_az:.1f} deg, el {path.aod_el:.2f} deg")
print(f"arrival         az {path.aoa_az:.1f} deg, el {path.aoa_el:.2f} deg")
print(f"delay           {path.delay * 1e9:.2f} ns")

###############################################################################
# With 16x16 arrays at both ends and both beams on the path, the receive
# SNR picks up the element gain (8 dBi) and 256 elements on each side.
array_gain_db = 2 * (8.0 + 10 * math.log10(256))
snr_db = path.rx_power + array_gain_db - radio.noise_power_dbm
snr = 10 ** (snr_db / 10)
print(f"\nbeamformed SNR  {snr_db:.1f} dB")
print(f"rate            {link_rate(snr, radio) / 1e9:.3f} Gbit/s")

# The rate saturates once log2(1 + SNR) hits the spectral-efficiency cap
cap = cap_sinr_threshold(radio)
print(f"cap reached at  {10 * math.log10(cap):.2f} dB, peak {radio.peak_rate_bps / 1e9:.2f} Gbit/s")
