import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from midhaul.arrays import (
    ArrayConfig,
    ArrayState,
    align_cu,
    align_du,
    element_gain_db,
    steering_vector,
    steering_vectors,
)
from midhaul.exceptions import DegenerateAlignmentError
from midhaul.trace_io import make_path_record

from oracles import direction, element_gain, frame, steering_loop

FC = 140e9


def path(pid, rx, aod=(0.0, 90.0), aoa=(180.0, 90.0), cu="CU1", du="DU1"):
    return make_path_record(pid, cu, du, rx, aod[0], aod[1], aoa[0], aoa[1], 0.0, 0.0)


def test_boresight_gain():
    assert element_gain_db([1.0, 0.0, 0.0]) == pytest.approx(8.0)


@pytest.mark.parametrize("az", [32.5, -32.5])
def test_half_beamwidth_azimuth_is_three_db_down(az):
    assert element_gain_db(direction(az, 90.0)) == pytest.approx(5.0)


@pytest.mark.parametrize("el", [90 - 32.5, 90 + 32.5])
def test_half_beamwidth_elevation_is_three_db_down(el):
    assert element_gain_db(direction(0.0, el)) == pytest.approx(5.0)


def test_back_lobe_floor():
    assert element_gain_db([-1.0, 0.0, 0.0]) == pytest.approx(-22.0)
    assert element_gain_db([0.0, 0.0, 1.0]) == pytest.approx(8 - 12 * (90 / 65) ** 2)


unit_vectors = st.tuples(
    st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)
).filter(lambda v: np.linalg.norm(v) > 1e-3).map(lambda v: np.array(v) / np.linalg.norm(v))


@given(unit_vectors)
@settings(max_examples=200, deadline=None)
def test_pattern_matches_oracle_and_is_bounded(d):
    g = element_gain_db(d)
    assert g == pytest.approx(element_gain(d), abs=1e-9)
    assert -22.0 - 1e-12 <= g <= 8.0 + 1e-12


@given(unit_vectors)
@settings(max_examples=200, deadline=None)
def test_pattern_mirror_symmetry(d):
    g = element_gain_db(d)
    assert element_gain_db(d * [1, -1, 1]) == pytest.approx(g, abs=1e-9)
    assert element_gain_db(d * [1, 1, -1]) == pytest.approx(g, abs=1e-9)


def test_pattern_at_pole_ignores_rounding_noise():
    # straight up the z' axis the azimuth is taken as 0
    expect = 8 - 12 * (90 / 65) ** 2
    for eps in (0.0, 1e-17, -1e-17):
        assert element_gain_db([-abs(eps) if eps else 0.0, eps, 1.0]) == pytest.approx(expect)


def test_element_positions_centered_row_major():
    pos = ArrayConfig(rows=2, cols=3, spacing=0.5).element_positions()
    assert pos.shape == (6, 3)
    assert np.allclose(pos.mean(axis=0), 0.0)
    assert np.allclose(pos[1] - pos[0], [0, 0.5, 0])
    assert np.allclose(pos[3] - pos[0], [0, 0, 0.5])


def test_broadside_entries_equal():
    state = ArrayState(ArrayConfig(rows=4, cols=4), (1.0, 0.0, 0.0))
    a = steering_vector(state, np.array([1.0, 0.0, 0.0]), FC)
    assert np.allclose(a, a[0])
    assert abs(a[0]) == pytest.approx(math.sqrt(10 ** 0.8))


def test_endfire_pair_phase_difference_is_pi():
    state = ArrayState(ArrayConfig(rows=2, cols=1), (1.0, 0.0, 0.0))
    a = steering_vector(state, np.array([0.0, 0.0, 1.0]), FC)
    diff = np.angle(a[1] / a[0])
    assert abs(abs(diff) - math.pi) < 1e-9


@given(unit_vectors, unit_vectors)
@settings(max_examples=100, deadline=None)
def test_norm_squared_is_size_times_gain(bore, d):
    state = ArrayState(ArrayConfig(rows=3, cols=5), tuple(bore))
    a = steering_vector(state, d, FC)
    g = element_gain_db(state.to_local(d))
    assert np.linalg.norm(a) ** 2 == pytest.approx(15 * 10 ** (g / 10), rel=1e-9)


@given(unit_vectors, unit_vectors)
@settings(max_examples=100, deadline=None)
def test_matches_per_element_loop(bore, d):
    state = ArrayState(ArrayConfig(rows=3, cols=4), tuple(bore))
    a = steering_vector(state, d, FC)
    ref = steering_loop(bore, d, 3, 4)
    assert np.allclose(a, ref, atol=1e-9)


@given(unit_vectors, unit_vectors, st.integers(0, 2**31 - 1))
@settings(max_examples=100, deadline=None)
def test_rotation_equivariance(bore, d, seed):
    rot = Rotation.random(random_state=seed).as_matrix()
    cfg = ArrayConfig(rows=2, cols=3)
    s0 = ArrayState(cfg, tuple(bore))
    s1 = ArrayState(cfg, tuple(rot @ bore), tuple(rot @ np.array(s0.up)))
    assert np.allclose(steering_vector(s0, d, FC), steering_vector(s1, rot @ d, FC), atol=1e-9)


def test_batched_equals_single():
    state = ArrayState(ArrayConfig(rows=2, cols=2), (0.3, 0.4, -0.2))
    dirs = np.array([direction(a, e) for a, e in [(0, 90), (40, 70), (-120, 130)]])
    batch = steering_vectors(state, dirs, FC)
    for row, d in zip(batch, dirs):
        assert np.allclose(row, steering_vector(state, d, FC))


def test_up_vector_falls_back_when_vertical():
    state = ArrayState(ArrayConfig(), (0.0, 0.0, -1.0))
    x, y, z = frame((0.0, 0.0, -1.0))
    assert np.allclose(state.rotation(), np.vstack([x, y, z]))
    assert np.allclose(state.up, [1.0, 0.0, 0.0])


def test_align_du_points_at_strongest_arrival():
    paths = [path(1, -80.0, aoa=(30.0, 80.0)), path(2, -70.0, aoa=(-45.0, 100.0))]
    state = align_du(paths)
    assert np.allclose(state.boresight, direction(-45.0, 100.0))


def test_align_du_tie_goes_to_lowest_path_id():
    paths = [path(7, -70.0, aoa=(10.0, 90.0)), path(3, -70.0, aoa=(50.0, 90.0))]
    assert np.allclose(align_du(paths).boresight, direction(50.0, 90.0))


def test_align_du_requires_paths():
    with pytest.raises(ValueError):
        align_du([])


def test_align_cu_single_du():
    state = align_cu({"DU1": [path(1, -60.0, aod=(20.0, 95.0))]})
    assert np.allclose(state.boresight, direction(20.0, 95.0))


def test_align_cu_symmetric_pair_bisects():
    state = align_cu({
        "DU1": [path(1, -60.0, aod=(30.0, 90.0), du="DU1")],
        "DU2": [path(2, -60.0, aod=(-30.0, 90.0), du="DU2")],
    })
    assert np.allclose(state.boresight, [1.0, 0.0, 0.0])


def test_align_cu_antipodal_is_degenerate():
    with pytest.raises(DegenerateAlignmentError):
        align_cu({
            "DU1": [path(1, -60.0, aod=(0.0, 90.0), du="DU1")],
            "DU2": [path(2, -60.0, aod=(-180.0, 90.0), du="DU2")],
        })


def test_align_cu_uses_only_strongest_path_per_du():
    strong = path(1, -60.0, aod=(10.0, 90.0))
    weak = path(2, -90.0, aod=(170.0, 90.0))
    assert np.allclose(align_cu({"DU1": [weak, strong]}).boresight, direction(10.0, 90.0))


@given(st.floats(-50, 50), st.floats(-200, -40))
@settings(max_examples=50, deadline=None)
def test_alignment_invariant_to_common_power_shift(shift, base):
    paths = [path(1, base, aod=(10, 80), aoa=(200, 100)),
             path(2, base - 3, aod=(-40, 95), aoa=(120, 85))]
    moved = [make_path_record(p.path_id, p.cu_id, p.du_id, p.rx_power + shift,
                              p.aod_az, p.aod_el, p.aoa_az, p.aoa_el, 0, 0) for p in paths]
    assert np.allclose(align_du(paths).boresight, align_du(moved).boresight)
    assert np.allclose(align_cu({"DU1": paths}).boresight, align_cu({"DU1": moved}).boresight)


def test_config_validation():
    with pytest.raises(ValueError):
        ArrayConfig(rows=0)
    with pytest.raises(ValueError):
        ArrayConfig(spacing=0)
    with pytest.raises(ValueError):
        ArrayState(ArrayConfig(), (0.0, 0.0, 0.0))
