import pytest

import scenarios as sc
from scenarios import Benchmark


def test_bdp_bytes():
    assert sc.bdp_bytes(48e6, 0.04) == pytest.approx(240000.0)
    assert sc.bdp_bytes(12e6, 0.01) == pytest.approx(15000.0)
    assert sc.bdp_bytes(192e6, 0.16) == pytest.approx(3840000.0)

    with pytest.raises(ValueError):
        sc.bdp_bytes(0.0, 0.04)

    with pytest.raises(ValueError):
        sc.bdp_bytes(48e6, -0.01)


def test_ccbench1_flat_grid():
    scenario_list = sc.build_ccbench1_flat()

    assert len(scenario_list) == 150
    assert len({scenario.id for scenario in scenario_list}) == 150

    for scenario in scenario_list:
        assert scenario.benchmark is Benchmark.CCBENCH1_FLAT
        assert scenario.duration == 30.0
        assert len(scenario.flows) == 1
        assert 12e6 <= scenario.link.trace.rate_at(0.0) <= 192e6
        assert 0.01 <= scenario.link.min_rtt <= 0.16

    scenario = next(s for s in scenario_list if s.id == "ccbench1_flat_bw48_rtt40_qs2")
    assert scenario.link.queue_capacity == 480000


def test_ccbench1_step_grid():
    scenario_list = sc.build_ccbench1_step()

    assert len(scenario_list) == 450
    assert not any(s.params["bw_mbps"] == 96.0 and s.params["m"] == 4.0 for s in scenario_list)

    for scenario in scenario_list:
        trace = scenario.link.trace
        assert all(3e6 <= rate <= 200e6 for _, rate in trace.segments)
        assert all(start % 7.0 == 0.0 for start, _ in trace.segments)

    scenario = next(s for s in scenario_list if s.id == "ccbench1_step_bw48_rtt40_qs1_m0.5")
    assert [rate / 1e6 for _, rate in scenario.link.trace.segments] == [48.0, 24.0, 48.0, 24.0, 48.0]
    assert [start for start, _ in scenario.link.trace.segments] == [0.0, 7.0, 14.0, 21.0, 28.0]

    # buffer anchored to the BDP of the starting capacity
    assert scenario.link.queue_capacity == 240000


def test_ccbench1_combined():
    assert len(sc.build_ccbench1()) == 600


def test_ccbench2_grid():
    scenario_list = sc.build_ccbench2("vegas")

    assert len(scenario_list) == 125

    for scenario in scenario_list:
        assert [(f.scheme, f.start_time) for f in scenario.flows] == [("cubic", 0.0), ("vegas", 10.0)]
        assert scenario.duration == 120.0
        assert scenario.measurement_window == (10.0, 120.0)
        assert scenario.params["qs_multiplier"] >= 1.0

    with pytest.raises(ValueError):
        sc.build_ccbench2("unknown_scheme")


def test_reproducible_ids():
    first = sc.build_benchmark("ccbench1")
    second = sc.build_benchmark("ccbench1")

    assert [s.id for s in first] == [s.id for s in second]
    assert first == second


def test_placeholder_resolution():
    scenario = sc.build_ccbench1_flat()[0]
    assert scenario.scheme_under_test == sc.SCHEME_UNDER_TEST

    resolved = scenario.with_scheme("bbr_lite")
    assert resolved.scheme_under_test == "bbr_lite"
    assert resolved.id == scenario.id

    friendly = sc.build_ccbench2()[0].with_scheme("ledbat")
    assert [f.scheme for f in friendly.flows] == ["cubic", "ledbat"]


def test_scenario_invariants():
    link = sc.build_ccbench1_flat()[0].link

    with pytest.raises(ValueError):
        sc.Scenario(id="x", benchmark=Benchmark.CCBENCH2, link=link, duration=120.0,
                    flows=(sc.FlowSpec("vegas", 0.0), sc.FlowSpec("cubic", 10.0)))

    with pytest.raises(ValueError):
        sc.Scenario(id="x", benchmark=Benchmark.CCBENCH1_FLAT, link=link, duration=30.0,
                    flows=(sc.FlowSpec("vegas", 0.0), sc.FlowSpec("cubic", 0.0)))


def test_sweeps():
    buffers = sc.build_buffer_sweep()
    assert [s.link.queue_capacity for s in buffers] == [64000, 128000, 256000, 512000, 1024000]
    assert all(s.benchmark is Benchmark.SWEEP for s in buffers)

    rtts = sc.build_min_rtt_sweep(min_rtts_ms=(40.0,))
    assert rtts[0].link.min_rtt == pytest.approx(0.04)
    assert rtts[0].link.queue_capacity == 1200000


def test_manifest_roundtrip(tmp_path):
    scenario_list = sc.build_ccbench1_step(grid={"step_bws_mbps": [48.0], "min_rtts_ms": [40.0]})
    path = str(tmp_path / "manifest.json")

    sc.save_manifest(scenario_list, path, {"benchmark": "ccbench1_step"})
    loaded, meta = sc.load_manifest(path)

    assert loaded == scenario_list
    assert meta["step_order"] == "bw1_first"
    assert meta["benchmark"] == "ccbench1_step"


def test_unknown_benchmark():
    with pytest.raises(ValueError):
        sc.build_benchmark("ccbench3")
