"""Narrowband MIMO channel matrix from a CU-DU path list."""

from dataclasses import dataclass

import numpy as np

from ._geometry import linear_to_db
from .arrays import steering_vectors
from .trace_io import path_gain_linear

__all__ = ["ChannelMatrix", "synthesize_channel", "channel_frobenius_gain"]


@dataclass(frozen=True, eq=False)
class ChannelMatrix:
    """``matrix`` is (DU elements) x (CU elements), complex."""

    matrix: np.ndarray
    cu_id: str
    du_id: str

    @property
    def shape(self):
        return self.matrix.shape


def synthesize_channel(paths, du_state, cu_state, carrier_hz, tx_power_dbm=43.0):
    """Sum of per-path rank-one terms.

    ``H = sum_k a_du(aoa_k) a_cu(aod_k)^T sqrt(g_k) exp(j(2 pi f delay_k + phase_k))``

    with ``g_k`` the path's linear gain relative to ``tx_power_dbm`` and the
    stored phase in radians added after the carrier-delay term.
    """
    if not paths:
        raise ValueError("cannot build a channel from an empty path list")
    pairs = {p.pair for p in paths}
    if len(pairs) != 1:
        raise ValueError(f"paths span several CU-DU pairs: {sorted(pairs)}")
    cu_id, du_id = next(iter(pairs))

    aoa = np.array([p.aoa for p in paths])
    aod = np.array([p.aod for p in paths])
    a_du = steering_vectors(du_state, aoa, carrier_hz)
    a_cu = steering_vectors(cu_state, aod, carrier_hz)
    gain = np.array([path_gain_linear(p, tx_power_dbm) for p in paths])
    # the carrier-delay term is taken modulo one cycle before scaling by 2 pi
    cycles = np.array([np.fmod(carrier_hz * p.delay, 1.0) for p in paths])
    phase = 2.0 * np.pi * cycles + np.array([p.phase for p in paths])
    coef = np.sqrt(gain) * np.exp(1j * phase)
    h = (a_du.T * coef) @ a_cu
    return ChannelMatrix(h, cu_id, du_id)


def channel_frobenius_gain(h):
    """10*log10 of the squared Frobenius norm; -inf for an all-zero matrix."""
    m = h.matrix if isinstance(h, ChannelMatrix) else np.asarray(h)
    return linear_to_db(float(np.sum(np.abs(m) ** 2)))
