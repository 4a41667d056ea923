import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from midhaul.exceptions import ZFInfeasibleError
from midhaul.mimo import (
    cap_sinr_threshold,
    extended_channel,
    fix_phase,
    group_sinrs,
    link_rate,
    sinr,
    slnr_precoder,
    slnr_precoders,
    slnr_value,
    zf_precoders,
)
from midhaul.trace_io import RadioParams

from oracles import slnr_eig_literal, slnr_generalized, slnr_linear


def cgauss(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)


def group(rng, k, n, m):
    return [cgauss(rng, m, n) for _ in range(k)]


def test_extended_channel_stacks_others_in_order():
    rng = np.random.default_rng(0)
    hs = [cgauss(rng, m, 5) for m in (1, 2, 3)]
    assert np.array_equal(extended_channel(hs, 1), np.vstack([hs[0], hs[2]]))
    assert extended_channel(hs, 2).shape == (3, 5)
    assert extended_channel(hs[:1], 0).shape == (0, 5)
    with pytest.raises(IndexError):
        extended_channel(hs, 3)


def test_single_du_matches_top_right_singular_vector():
    rng = np.random.default_rng(1)
    h = cgauss(rng, 4, 8)
    w = slnr_precoder([h], 0, 0.3)
    v = np.linalg.svd(h)[2][0].conj()
    assert abs(np.vdot(v, w)) >= 1 - 1e-10


def test_single_antenna_transmitter():
    rng = np.random.default_rng(2)
    hs = group(rng, 3, 1, 2)
    assert np.array_equal(slnr_precoder(hs, 1, 1.0), [1.0])
    assert all(np.array_equal(w, [1.0]) for w in slnr_precoders(hs, 1.0))


@pytest.mark.parametrize("seed", range(5))
def test_beats_random_precoders(seed):
    rng = np.random.default_rng(seed)
    hs = group(rng, 3, 8, 2)
    noise = 0.1
    w = slnr_precoder(hs, 0, noise)
    ht = extended_channel(hs, 0)
    best = slnr_linear(hs[0], ht, w, noise, 2)
    trials = cgauss(rng, 10_000, 8)
    trials /= np.linalg.norm(trials, axis=1, keepdims=True)
    sig = np.linalg.norm(trials @ hs[0].T, axis=1) ** 2
    leak = np.linalg.norm(trials @ ht.T, axis=1) ** 2
    assert best >= np.max(sig / (2 * noise + leak))


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(2, 10), st.integers(1, 3),
       st.floats(1e-3, 10.0))
@settings(max_examples=100, deadline=None)
def test_value_equals_generalized_eigenvalue(seed, k, n, m, noise):
    rng = np.random.default_rng(seed)
    hs = group(rng, k, n, m)
    i = int(rng.integers(k))
    w = slnr_precoder(hs, i, noise)
    got = slnr_linear(hs[i], extended_channel(hs, i), w, noise, m)
    lam_g, _ = slnr_generalized(hs[i], extended_channel(hs, i), noise, m)
    lam_e, _ = slnr_eig_literal(hs[i], extended_channel(hs, i), noise, m)
    assert got == pytest.approx(lam_g, rel=1e-8)
    assert got == pytest.approx(lam_e, rel=1e-7)
    assert np.linalg.norm(w) == pytest.approx(1.0, abs=1e-12)


@given(st.integers(0, 2**32 - 1), st.floats(0.0, 2 * math.pi))
@settings(max_examples=50, deadline=None)
def test_common_phase_rotation_invariance(seed, theta):
    rng = np.random.default_rng(seed)
    hs = group(rng, 3, 6, 2)
    w0 = slnr_precoder(hs, 0, 0.5)
    w1 = slnr_precoder([h * np.exp(1j * theta) for h in hs], 0, 0.5)
    assert abs(abs(np.vdot(w0, w1)) - 1) < 1e-9


def test_batched_matches_individual():
    rng = np.random.default_rng(5)
    hs = [cgauss(rng, m, 6) for m in (1, 2, 3)]
    noises = [0.2, 0.5, 1.0]
    batch = slnr_precoders(hs, noises)
    for i, w in enumerate(batch):
        assert np.allclose(w, slnr_precoder(hs, i, noises[i]), atol=1e-9)


def test_fix_phase_makes_largest_entry_real_positive():
    w = fix_phase(np.array([0.1j, -2.0 + 0.5j, 0.3]))
    k = int(np.argmax(np.abs(w)))
    assert w[k].imag == pytest.approx(0.0, abs=1e-15) and w[k].real > 0


def test_slnr_rejects_bad_noise_and_nan():
    rng = np.random.default_rng(3)
    hs = group(rng, 2, 4, 1)
    with pytest.raises(ValueError):
        slnr_precoder(hs, 0, 0.0)
    hs[1][0, 0] = np.nan
    with pytest.raises(ValueError):
        slnr_precoder(hs, 0, 1.0)


def test_slnr_value_db():
    h = np.array([[1.0, 0.0]])
    other = np.array([[0.0, 1.0]])
    w = np.array([1.0, 1.0]) / math.sqrt(2)
    # signal 0.5, leakage 0.5, noise 1 * 0.5
    assert slnr_value([h, other], 0, w, 0.5) == pytest.approx(10 * math.log10(0.5))


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 3))
@settings(max_examples=100, deadline=None)
def test_zf_nulls_leakage(seed, k, m):
    rng = np.random.default_rng(seed)
    n = k * m + int(rng.integers(0, 4))
    hs = group(rng, k, n, m)
    ws = zf_precoders(hs)
    for i, w in enumerate(ws):
        assert np.linalg.norm(w) == pytest.approx(1.0, abs=1e-12)
        sig = np.linalg.norm(hs[i] @ w) ** 2
        leak = np.linalg.norm(extended_channel(hs, i) @ w) ** 2
        assert leak <= 1e-16 * sig


def test_zf_single_du_is_svd():
    rng = np.random.default_rng(4)
    h = cgauss(rng, 2, 5)
    (w,) = zf_precoders([h])
    assert abs(np.vdot(np.linalg.svd(h)[2][0].conj(), w)) == pytest.approx(1.0, abs=1e-12)


def test_zf_infeasible():
    rng = np.random.default_rng(6)
    with pytest.raises(ZFInfeasibleError, match="N >= sum"):
        zf_precoders(group(rng, 3, 5, 2))


def test_zf_gives_interference_free_sinr():
    rng = np.random.default_rng(7)
    hs = group(rng, 3, 8, 2)
    ws = zf_precoders(hs)
    gam = group_sinrs(hs, ws, [1.0] * 3, 0.1)
    for i in range(3):
        assert gam[i] == pytest.approx(np.linalg.norm(hs[i] @ ws[i]) ** 2 / 0.1, rel=1e-9)


def test_scalar_sinr_with_equal_interferer():
    # one receive antenna, one interferer as strong as the signal, no noise
    h = np.array([[1.0, 1.0]])
    w = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    assert sinr([h, h], w, [1.0, 1.0], 1e-300, 0) == pytest.approx(0.0, abs=1e-9)
    assert sinr([h, h], w, [1.0, 1.0], 1.0, 0) == pytest.approx(-10 * math.log10(2), abs=1e-12)


def test_external_interference_lowers_sinr():
    rng = np.random.default_rng(8)
    hs = group(rng, 2, 6, 2)
    ws = slnr_precoders(hs, 0.1)
    base = sinr(hs, ws, [1.0, 1.0], 0.1, 0)
    ext = [(cgauss(rng, 2, 6), fix_phase(cgauss(rng, 6)) / 3, 1.0)]
    assert sinr(hs, ws, [1.0, 1.0], 0.1, 0, ext) < base


def test_zero_effective_channel_gives_zero_sinr():
    h = np.zeros((2, 3))
    assert sinr([h], [np.array([1.0, 0, 0])], [1.0], 1.0, 0) == -math.inf


def test_link_rate_values():
    r = RadioParams()
    assert link_rate(0.0, r) == 0.0
    assert link_rate(1.0, r) == pytest.approx(2e9 * 0.85)
    assert link_rate(1e9, r) == pytest.approx(10.03e9)
    thr = cap_sinr_threshold(r)
    assert thr == pytest.approx(58.71411145835569, rel=1e-12)
    assert 10 * math.log10(thr) == pytest.approx(17.687424929335688, abs=1e-9)
    assert link_rate(thr, r) == pytest.approx(10.03e9, rel=1e-12)
    assert link_rate(thr * 0.99, r) < 10.03e9
    with pytest.raises(ValueError):
        link_rate(-1.0, r)


@given(st.floats(0, 1e6), st.floats(0, 1e6))
@settings(max_examples=200, deadline=None)
def test_link_rate_monotone_and_capped(a, b):
    r = RadioParams()
    lo, hi = sorted((a, b))
    assert link_rate(lo, r) <= link_rate(hi, r) <= r.peak_rate_bps * (1 + 1e-15)
