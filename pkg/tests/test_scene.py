import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from midhaul.exceptions import SceneCapacityError
from midhaul.records import Node
from midhaul.scene import (
    Building,
    PropagationConfig,
    SceneConfig,
    free_space_loss_db,
    generate_scene,
    host_building,
    line_of_sight,
    read_scene,
    synthesize_paths,
    write_scene,
)
from midhaul.trace_io import RadioParams, serialize_nodes, serialize_trace

from oracles import C0, los_by_sampling

THREE = [
    Building(10, 10, 20, 20, 30),
    Building(40, 0, 50, 30, 12),
    Building(0, 40, 30, 50, 20),
]


def test_generate_determinism():
    cfg = SceneConfig(seed=1)
    b1, n1 = generate_scene(cfg)
    b2, n2 = generate_scene(cfg)
    assert b1 == b2
    assert serialize_nodes(n1) == serialize_nodes(n2)


def test_default_counts_and_cu_above_du():
    _, nodes = generate_scene(SceneConfig(seed=3))
    cus = [n for n in nodes if n.kind == "CU"]
    dus = [n for n in nodes if n.kind == "DU"]
    assert len(cus) == 8 and len(dus) == 36
    assert min(n.position[2] for n in cus) > max(n.position[2] for n in dus)
    assert len({n.id for n in nodes}) == 44


def test_nodes_sit_on_their_roofs():
    cfg = SceneConfig(seed=5, mast_height=2.0)
    buildings, nodes = generate_scene(cfg)
    for n in nodes:
        k = host_building(n, buildings)
        assert k is not None
        assert n.position[2] == pytest.approx(buildings[k].height + 2.0)


def test_capacity_error():
    with pytest.raises(SceneCapacityError):
        generate_scene(SceneConfig(grid=(1, 1), cu_count=2, du_count=1))
    with pytest.raises(SceneCapacityError):
        generate_scene(SceneConfig(grid=(2, 2), footprint_range=(20, 40), cu_count=2, du_count=3))


def test_config_validation():
    with pytest.raises(ValueError):
        SceneConfig(cu_count=0)
    with pytest.raises(ValueError):
        SceneConfig(grid=(2, 2), area=50.0)


def test_los_clear_above_everything():
    assert line_of_sight((0, 0, 100), (60, 60, 90), THREE)


def test_los_forced_block():
    assert not line_of_sight((5, 15, 10), (25, 15, 10), THREE)


def test_los_endpoint_on_roof_not_blocked():
    b = [Building(0, 0, 10, 10, 20)]
    assert line_of_sight((5, 5, 20), (50, 50, 40), b)
    assert line_of_sight((5, 5, 20), (5, 5, 30), b)


LOS_CASES = [
    ((0, 0, 5), (60, 60, 5)),
    ((0, 0, 35), (60, 60, 5)),
    ((15, 5, 10), (15, 35, 10)),
    ((15, 5, 40), (15, 35, 10)),
    ((45, 35, 15), (45, -5, 15)),
    ((45, 35, 5), (45, -5, 25)),
    ((15, 60, 25), (15, 35, 5)),
    ((35, 45, 10), (-5, 45, 18)),
    ((55, 55, 2), (5, 5, 45)),
    ((60, 15, 11), (-2, 15, 14)),
]


@pytest.mark.parametrize("a, b", LOS_CASES)
def test_los_matches_sampling_oracle(a, b):
    boxes = [(bl.x_min, bl.y_min, bl.x_max, bl.y_max, bl.height) for bl in THREE]
    assert line_of_sight(a, b, THREE) == los_by_sampling(a, b, boxes, step=0.01)


coords = st.tuples(st.floats(-10, 60), st.floats(-10, 60), st.floats(0, 40))


@given(coords, coords)
@settings(max_examples=200, deadline=None)
def test_los_symmetric(a, b):
    assert line_of_sight(a, b, THREE) == line_of_sight(b, a, THREE)


def test_free_space_loss_values():
    assert free_space_loss_db(100.0, 140e9) == pytest.approx(115.37034393544813, abs=1e-9)
    assert abs(free_space_loss_db(100.0, 140e9) - 115.37) < 0.05
    lam = C0 / 140e9
    assert free_space_loss_db(lam / (4 * math.pi), 140e9) == pytest.approx(0.0, abs=1e-12)


def _pair(cu_xyz, du_xyz, buildings=(), **prop):
    nodes = [Node("CU1", "CU", cu_xyz), Node("DU1", "DU", du_xyz)]
    return synthesize_paths(list(buildings), nodes, RadioParams(), PropagationConfig(**prop))


def test_los_path_gain_delay_phase():
    (rec,) = _pair((0, 0, 10), (100, 0, 10), absorption_db_per_m=0.0)
    assert rec.rx_power == pytest.approx(43.0 - 115.37034393544813, abs=1e-9)
    assert rec.delay == pytest.approx(100 / C0, rel=1e-15)
    expect = (-2 * math.pi * 140e9 * rec.delay) % (2 * math.pi)
    assert rec.phase == pytest.approx(expect, abs=1e-6)
    assert (rec.aod_az, rec.aod_el) == pytest.approx((0.0, 90.0))
    assert (rec.aoa_az, rec.aoa_el) == pytest.approx((-180.0, 90.0))


def test_absorption_adds_linear_loss():
    (a,) = _pair((0, 0, 10), (200, 0, 10), absorption_db_per_m=0.0)
    (b,) = _pair((0, 0, 10), (200, 0, 10))
    assert a.rx_power - b.rx_power == pytest.approx(0.0015 * 200)


def test_vertical_path_azimuth_convention():
    (rec,) = _pair((5, 5, 50), (5, 5, 10))
    assert rec.aod_el == pytest.approx(180.0)
    assert rec.aod_az == 0.0
    assert rec.aoa_el == pytest.approx(0.0)
    assert rec.aoa_az == 0.0


def test_gain_decreases_with_distance():
    powers = [_pair((0, 0, 10), (d, 0, 10), absorption_db_per_m=0.0)[0].rx_power
              for d in (10, 20, 50, 100, 300)]
    assert all(x > y for x, y in zip(powers, powers[1:]))


def test_blocked_pair_without_reflections_has_no_records():
    wall = [Building(40, -20, 60, 20, 50)]
    assert _pair((0, 0, 10), (100, 0, 10), wall, reflections=False) == []


def test_single_bounce_reflection_geometry():
    # a wall at y = 20 beside a blocking tower; the bounce point is at x = 50
    blocker = Building(45, -10, 55, 5, 50)
    mirror = Building(0, 20, 100, 30, 40)
    recs = _pair((0, 0, 10), (100, 0, 10), [blocker, mirror], host_transparent=False)
    assert len(recs) == 1
    rec = recs[0]
    length = math.hypot(100, 40)
    lam = C0 / 140e9
    expect = 43.0 - 20 * math.log10(4 * math.pi * length / lam) - 0.0015 * length - 10.0
    assert rec.rx_power == pytest.approx(expect, abs=1e-9)
    assert rec.delay == pytest.approx(length / C0)
    assert rec.aod_az == pytest.approx(math.degrees(math.atan2(20, 50)))
    # the wave arrives at the DU from the bounce point (50, 20)
    assert rec.aoa_az == pytest.approx(math.degrees(math.atan2(20, -50)))


def test_max_paths_cap():
    # three short mirror walls, each centred on its bounce point at x = 50
    walls = [Building(45, 20, 55, 25, 40), Building(45, -35, 55, -30, 40),
             Building(45, 60, 55, 65, 40)]
    assert len(_pair((0, 0, 10), (100, 0, 10), walls)) == 4
    recs = _pair((0, 0, 10), (100, 0, 10), walls, max_paths=3)
    assert len(recs) == 3
    assert recs[0].rx_power >= recs[1].rx_power >= recs[2].rx_power


def test_los_aoa_is_negated_aod_and_phase_matches_delay():
    buildings, nodes = generate_scene(SceneConfig(seed=2))
    recs = synthesize_paths(buildings, nodes, RadioParams(), PropagationConfig(reflections=False))
    assert recs
    for r in recs:
        assert np.allclose(r.aoa, -r.aod, atol=1e-12)
        expect = (-2 * math.pi * 140e9 * r.delay) % (2 * math.pi)
        d = abs(r.phase - expect)
        assert min(d, 2 * math.pi - d) < 1e-6


def test_synthesis_deterministic():
    buildings, nodes = generate_scene(SceneConfig(seed=4))
    a = synthesize_paths(buildings, nodes, RadioParams())
    b = synthesize_paths(buildings, nodes, RadioParams())
    assert serialize_trace(a) == serialize_trace(b)
    assert all(r.aod_el >= 0 for r in a)


def test_scene_file_round_trip():
    cfg = SceneConfig(seed=9, grid=(4, 5), area=300.0, cu_count=3, du_count=10)
    buildings, _ = generate_scene(cfg)
    cfg2, b2 = read_scene(write_scene(cfg, buildings))
    assert cfg2 == cfg
    assert b2 == buildings


def test_scene_file_rejects_unknown_key():
    with pytest.raises(ValueError, match="unknown"):
        read_scene("bogus = 1\n")
