"""
SLNR versus zero-forcing precoding
==================================

One CU with 16 antennas serves three DUs with 4 antennas each over
random Rayleigh channels. SLNR precoding trades leakage against noise;
zero forcing nulls leakage outright. At low SNR the SLNR precoder keeps
more signal, at high SNR both converge.
"""

import numpy as np

from midhaul.mimo import group_sinrs, slnr_precoders, zf_precoders

rng = np.random.default_rng(1)
n_tx, n_rx, k = 16, 4, 3


def channels():
    return [(rng.standard_normal((n_rx, n_tx)) + 1j * rng.standard_normal((n_rx, n_tx))) / np.sqrt(2)
            for _ in range(k)]


print("SNR dB   mean SINR (SLNR)   mean SINR (ZF)")
for snr_db in (-10, 0, 10, 20, 30):
    noise = 10 ** (-snr_db / 10)
    power = 1.0 / k
    slnr_db, zf_db = [], []
    for _ in range(200):
        hs = channels()
        # the SLNR noise term is normalized by the per-DU power
        ws = slnr_precoders(hs, noise / power)
        slnr_db += list(10 * np.log10(group_sinrs(hs, ws, [power] * k, noise)))
        ws = zf_precoders(hs)
        zf_db += list(10 * np.log10(group_sinrs(hs, ws, [power] * k, noise)))
    print(f"{snr_db:>6}   {np.mean(slnr_db):16.2f}   {np.mean(zf_db):14.2f}")

###############################################################################
# Zero forcing needs at least as many CU antennas as the DUs have in total.
try:
    zf_precoders([h[:, :8] for h in channels()])
except ValueError as exc:
    print(f"\n8 CU antennas for 12 DU antennas: {exc}")
