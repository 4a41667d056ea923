"""Downlink MU-MIMO: SLNR and zero-forcing precoders, MRC receive SINR and
the capped Shannon rate.

Channels are passed as an ordered list of (M_i x N) matrices, one per
served DU, either as bare arrays or :class:`~midhaul.channel.ChannelMatrix`.
Every DU receives a single stream through a unit-norm precoder.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from ._geometry import linear_to_db
from .exceptions import ZFInfeasibleError

__all__ = [
    "PrecodedGroup",
    "LinkMetrics",
    "extended_channel",
    "slnr_precoder",
    "slnr_precoders",
    "zf_precoders",
    "slnr_value",
    "sinr",
    "group_sinrs",
    "link_rate",
    "cap_sinr_threshold",
    "fix_phase",
]


@dataclass(frozen=True, eq=False)
class PrecodedGroup:
    """Precoders and power split for the DUs one CU serves."""

    cu_id: str
    du_ids: tuple
    precoders: tuple
    powers: tuple

    @classmethod
    def equal_power(cls, cu_id, du_ids, precoders, total_power_w):
        k = len(du_ids)
        return cls(cu_id, tuple(du_ids), tuple(precoders), tuple([total_power_w / k] * k))


@dataclass(frozen=True)
class LinkMetrics:
    cu_id: str
    du_id: str
    slnr_db: float
    sinr_db: float
    rate_bps: float


def _mat(h):
    return np.asarray(getattr(h, "matrix", h))


def _check_finite(mats):
    for m in mats:
        if not np.all(np.isfinite(m)):
            raise ValueError("channel contains non-finite entries")


def fix_phase(w):
    """Rotate ``w`` so its largest-magnitude entry is real and positive."""
    k = int(np.argmax(np.abs(w)))
    if abs(w[k]) == 0:
        return w
    return w * (abs(w[k]) / w[k])


def extended_channel(channels, i):
    """Stack of every channel except the i-th, in order; (sum M_j) x N."""
    mats = [_mat(h) for h in channels]
    if not 0 <= i < len(mats):
        raise IndexError(f"channel index {i} out of range for {len(mats)} channels")
    n = mats[i].shape[1]
    others = [m for j, m in enumerate(mats) if j != i]
    if not others:
        return np.zeros((0, n), dtype=complex)
    return np.vstack(others)


def _max_generalized_eigvec(a, b):
    """Top eigenpair of b^{-1} a for Hermitian a and Hermitian PD b.

    Whitens with the Cholesky factor of b so the problem becomes an
    ordinary Hermitian eigenproblem.
    """
    lower = cholesky(b, lower=True)
    tmp = solve_triangular(lower, a, lower=True)
    c = solve_triangular(lower, tmp.conj().T, lower=True).conj().T
    c = 0.5 * (c + c.conj().T)
    vals, vecs = np.linalg.eigh(c)
    y = vecs[:, -1]
    w = solve_triangular(lower.conj().T, y, lower=False)
    return vals[-1], w


def slnr_precoder(channels, i, noise_var, m_i=None):
    """Unit-norm precoder maximizing DU i's signal-to-leakage-plus-noise ratio.

    This is the dominant eigenvector of
    ``(m_i * noise_var * I + Ht^H Ht)^{-1} H_i^H H_i`` where ``Ht`` stacks the
    other DUs' channels. ``m_i`` defaults to the row count of ``H_i``.
    """
    mats = [_mat(h) for h in channels]
    _check_finite(mats)
    if not noise_var > 0:
        raise ValueError("noise variance must be positive")
    h = mats[i]
    n = h.shape[1]
    if n == 1:
        return np.ones(1, dtype=complex)
    m = h.shape[0] if m_i is None else m_i
    ht = extended_channel(mats, i)
    b = m * noise_var * np.eye(n) + ht.conj().T @ ht
    _, w = _max_generalized_eigvec(h.conj().T @ h, b)
    return fix_phase(w / np.linalg.norm(w))


def slnr_precoders(channels, noise_vars):
    """SLNR precoders for every DU of a group, sharing the Gram matrices."""
    mats = [_mat(h) for h in channels]
    _check_finite(mats)
    noise_vars = np.broadcast_to(np.asarray(noise_vars, dtype=float), (len(mats),))
    n = mats[0].shape[1]
    if n == 1:
        return [np.ones(1, dtype=complex) for _ in mats]
    grams = [m.conj().T @ m for m in mats]
    total = sum(grams)
    out = []
    for m, g, s2 in zip(mats, grams, noise_vars):
        if not s2 > 0:
            raise ValueError("noise variance must be positive")
        b = m.shape[0] * s2 * np.eye(n) + (total - g)
        _, w = _max_generalized_eigvec(g, b)
        out.append(fix_phase(w / np.linalg.norm(w)))
    return out


def zf_precoders(channels):
    """Block-diagonalizing single-stream precoders.

    Each W_i lies in the null space of the other DUs' stacked channel and,
    within it, maximizes ||H_i W_i||. Needs N >= sum of DU antenna counts.
    """
    mats = [_mat(h) for h in channels]
    _check_finite(mats)
    n = mats[0].shape[1]
    total_rx = sum(m.shape[0] for m in mats)
    if n < total_rx:
        raise ZFInfeasibleError(
            f"zero-forcing needs N >= sum(M_i): N = {n}, sum(M_i) = {total_rx}"
        )
    out = []
    for i, h in enumerate(mats):
        ht = extended_channel(mats, i)
        if ht.shape[0] == 0:
            basis = np.eye(n, dtype=complex)
        else:
            _, s, vh = np.linalg.svd(ht, full_matrices=True)
            tol = max(ht.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
            rank = int(np.sum(s > tol))
            basis = vh[rank:].conj().T
        _, _, vh_eff = np.linalg.svd(h @ basis, full_matrices=False)
        w = basis @ vh_eff[0].conj()
        out.append(fix_phase(w / np.linalg.norm(w)))
    return out


def slnr_value(channels, i, w, noise_var, m_i=None):
    """SLNR of precoder ``w`` for DU i in dB (-inf when no signal reaches it)."""
    mats = [_mat(h) for h in channels]
    h = mats[i]
    m = h.shape[0] if m_i is None else m_i
    signal = float(np.linalg.norm(h @ w) ** 2)
    leak = float(np.linalg.norm(extended_channel(mats, i) @ w) ** 2)
    return linear_to_db(signal / (m * noise_var + leak))


def _sinr_linear(h_i, precoders, powers, noise_var, i, external=()):
    eff = h_i @ precoders[i]
    norm = np.linalg.norm(eff)
    if norm == 0:
        return 0.0
    v = eff / norm
    signal = powers[i] * norm**2
    interference = 0.0
    for j, (w, p) in enumerate(zip(precoders, powers)):
        if j != i:
            interference += p * abs(np.vdot(v, h_i @ w)) ** 2
    for h_ext, w, p in external:
        interference += p * abs(np.vdot(v, _mat(h_ext) @ w)) ** 2
    return float(signal / (noise_var + interference))


def sinr(channels, precoders, powers, noise_vars, i, external=()):
    """SINR of DU i in dB after maximum-ratio combining.

    The combiner is matched to DU i's own effective channel ``H_i W_i``.
    ``external`` optionally lists ``(H, w, p)`` interferers from other
    transmitters, where ``H`` is the channel from that transmitter to DU i.
    """
    mats = [_mat(h) for h in channels]
    noise = np.broadcast_to(np.asarray(noise_vars, dtype=float), (len(mats),))
    return linear_to_db(_sinr_linear(mats[i], precoders, powers, noise[i], i, external))


def group_sinrs(channels, precoders, powers, noise_vars, external=None):
    """Linear SINRs for every DU of a group. ``external[i]`` as in :func:`sinr`."""
    mats = [_mat(h) for h in channels]
    noise = np.broadcast_to(np.asarray(noise_vars, dtype=float), (len(mats),))
    ext = external or [()] * len(mats)
    return [_sinr_linear(m, precoders, powers, noise[i], i, ext[i]) for i, m in enumerate(mats)]


def link_rate(gamma, radio):
    """``B (1 - beta) min(log2(1 + gamma), rho_max)`` in bit/s; gamma is linear."""
    if gamma < 0:
        raise ValueError("SINR must be non-negative")
    se = min(math.log2(1.0 + gamma), radio.max_spectral_efficiency)
    return radio.bandwidth_hz * (1.0 - radio.loss_factor) * se


def cap_sinr_threshold(radio):
    """Linear SINR at which :func:`link_rate` reaches its cap."""
    return 2.0 ** radio.max_spectral_efficiency - 1.0
