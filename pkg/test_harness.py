import os

import pandas as pd
import pytest

import cc_schemes
import harness
import main_ccbench
import scenarios as sc


class Broken(cc_schemes.CongestionControl):
    name = "broken"

    def _on_ack(self, event):
        raise RuntimeError("broken scheme")


def _small_config(**kwargs) -> harness.RunConfig:
    config = harness.RunConfig(benchmark="ccbench1_flat",
                               schemes=["newreno", "vegas"],
                               grid={"bws_mbps": [12.0], "min_rtts_ms": [20.0], "qs_multipliers": [1.0, 4.0]})
    config.run_pars = dict(config.run_pars, ccbench1_duration_s=4.0, ccbench2_duration_s=8.0, ccbench2_stagger_s=2.0)

    for key, value in kwargs.items():
        setattr(config, key, value)

    return config


# ----------------------------------------------------------------------------------------------------------------------
# RUN ------------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def test_run_small_grid():
    bundle = harness.run(_small_config())
    results = bundle.results_frame()

    assert len(bundle.scenarios) == 2
    assert len(bundle.records) == 2 * 2 * 4
    assert bundle.failures.empty
    assert list(results.columns) == harness.RESULTS_COLUMNS
    assert set(results["score_kind"]) == {"power"}
    assert results["f_mbps"].isna().all()
    assert (results["score"] > 0.0).all()
    assert set(bundle.ranking.schemes) == {"newreno", "vegas"}
    assert all(0.0 <= rate <= 100.0 for _, rate in bundle.ranking.entries)

    # every cell has at least one winner
    assert len(bundle.winners) == 2 * 4
    assert all(bundle.winners.values())


def test_run_is_deterministic(tmp_path):
    out_a = str(tmp_path / "a")
    out_b = str(tmp_path / "b")
    bundle_a = harness.run(_small_config(out_dir=out_a))
    bundle_b = harness.run(_small_config(out_dir=out_b, parallel=2))

    for name in ("manifest.json", "results.csv", "failures.csv", "measurements.csv", "traces.csv", "ranking.csv"):
        with open(os.path.join(out_a, name)) as fh_a, open(os.path.join(out_b, name)) as fh_b:
            assert fh_a.read() == fh_b.read()

    # parallelism does not enter the config hash
    assert bundle_a.config_hash == bundle_b.config_hash
    assert harness.config_hash(_small_config(alpha=1.0), bundle_a.scenarios) != bundle_a.config_hash


def test_load_rescore_report(tmp_path):
    out_dir = str(tmp_path / "run")
    bundle = harness.run(_small_config(out_dir=out_dir))
    loaded = harness.load_bundle(out_dir)

    pd.testing.assert_frame_equal(loaded.results_frame(), bundle.results_frame())
    assert loaded.ranking == bundle.ranking

    # report is idempotent
    harness.report(loaded, out_dir=out_dir)
    with open(os.path.join(out_dir, "series.csv")) as fh:
        first = fh.read()
    harness.report(harness.load_bundle(out_dir), out_dir=out_dir)
    with open(os.path.join(out_dir, "series.csv")) as fh:
        assert fh.read() == first

    with open(os.path.join(out_dir, "report.txt")) as fh:
        assert fh.readline().startswith("Each (scenario, scheme) cell is simulated once")

    rescored = harness.rescore(loaded, alpha=1.0)
    rec, rec_1 = bundle.records[0], rescored.records[0]
    assert rec_1.value == pytest.approx(rec.r_mbps / rec.d_ms)
    assert rec.value == pytest.approx(rec.r_mbps ** 2 / rec.d_ms)


def test_run_ccbench2_small():
    bundle = harness.run(_small_config(benchmark="ccbench2", schemes=["cubic"]))
    results = bundle.results_frame()

    assert len(bundle.scenarios) == 2
    for scenario in bundle.scenarios:
        assert [(f.scheme, f.start_time) for f in scenario.flows] == [("cubic", 0.0), (sc.SCHEME_UNDER_TEST, 2.0)]

    assert set(results["score_kind"]) == {"friendliness"}
    assert results["f_mbps"].tolist() == pytest.approx([6.0] * len(results))
    assert bundle.ranking.entries == (("cubic", 100.0),)


def test_run_from_manifest(tmp_path):
    config = _small_config()
    scenario_list, meta = harness.materialize_scenarios(config)
    path = str(tmp_path / "manifest.json")
    sc.save_manifest(scenario_list, path, meta)

    pinned = harness.run(_small_config(manifest=path))
    pd.testing.assert_frame_equal(pinned.results_frame(), harness.run(config).results_frame())

    with pytest.raises(ValueError):
        harness.run(_small_config(manifest=path, benchmark="ccbench2"))

    with pytest.raises(ValueError):
        harness.run(_small_config(manifest=path, grid={"bws_mbps": [24.0]}))


# ----------------------------------------------------------------------------------------------------------------------
# FAILURES -------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def test_failed_cells_are_logged(monkeypatch):
    monkeypatch.setitem(cc_schemes.SCHEMES, "broken", Broken)

    bundle = harness.run(_small_config(schemes=["newreno", "broken"]))

    assert bundle.partial
    assert len(bundle.failures) == 2 * 4
    assert set(bundle.failures["scheme"]) == {"broken"}
    assert set(bundle.failures["result_status"]) == {-1}

    # completeness: every (scenario, scheme, interval) either scored or logged as failure
    assert len(bundle.records) + len(bundle.failures) == 2 * 2 * 4
    assert bundle.ranking.entries == (("newreno", 100.0), ("broken", 0.0))


def test_stalled_cell_keeps_completed_intervals():
    config = _small_config(schemes=["newreno"], grid={"bws_mbps": [0.001], "min_rtts_ms": [20.0],
                                                      "qs_multipliers": [1.0]})
    config.run_pars["ccbench1_duration_s"] = 20.0

    bundle = harness.run(config)

    assert sorted(bundle.failures["interval"]) == [2, 3]
    assert set(bundle.failures["result_status"]) == {1}
    assert [rec.interval_index for rec in bundle.records] == [0, 1]
    assert bundle.traces["stalled"].all()


@pytest.mark.parametrize("stalled_flow, status", [(0, 0), (1, 1)])
def test_only_flow_under_test_stalls_cell(monkeypatch, stalled_flow, status):
    simulate = harness.netsim.simulate

    def _simulate_with_stall(*args, **kwargs):
        traces = simulate(*args, **kwargs)
        traces[stalled_flow].stalled = True
        traces[stalled_flow].stall_time = 3.0
        return traces

    monkeypatch.setattr(harness.netsim, "simulate", _simulate_with_stall)
    config = _small_config(benchmark="ccbench2", schemes=["cubic"])
    scenario = harness.materialize_scenarios(config)[0][0]

    cell = harness.simulate_cell(scenario, "cubic")

    assert cell.result_status == status
    assert bool(cell.failed_intervals(4)) == bool(status)
    assert cell.traces[stalled_flow]["stalled"]


def test_config_errors():
    for kwargs in ({"schemes": ["reno2000"]}, {"schemes": []}, {"parallel": 0}, {"alpha": 0.0},
                   {"benchmark": "ccbench3"}, {"grid": {"bandwidths": [12.0]}}, {"grid": {"bws_mbps": [-1.0]}}):
        with pytest.raises(ValueError):
            _small_config(**kwargs).check()


def test_report_empty_bundle():
    bundle = harness.ResultsBundle(benchmark="ccbench1", schemes=["cubic"], alpha=2.0,
                                   score_pars=dict(harness.DEFAULT_SCORE_PARS), scenarios=[], manifest_meta={},
                                   measurements=pd.DataFrame(columns=harness.MEASUREMENTS_COLUMNS),
                                   traces=pd.DataFrame(),
                                   failures=pd.DataFrame(columns=harness.FAILURES_COLUMNS))

    with pytest.raises(ValueError):
        harness.report(harness.score_bundle(bundle))


def test_sweep_series():
    series = harness.sweep("buffer", ["newreno"], points=[64.0, 256.0], duration=3.0)

    assert list(series["x"]) == [64.0, 256.0]
    assert (series["score"] > 0.0).all()

    with pytest.raises(ValueError):
        harness.sweep("bandwidth", ["newreno"])


def test_plots_written(tmp_path):
    out_dir = str(tmp_path / "plots")

    harness.sweep("min_rtt", ["newreno", "vegas"], points=[20.0, 40.0], duration=2.0, out_dir=out_dir, plot=True)
    assert os.path.isfile(os.path.join(out_dir, "sweep_min_rtt.csv"))
    assert os.path.isfile(os.path.join(out_dir, "sweep_min_rtt.png"))

    harness.report(harness.run(_small_config()), out_dir=out_dir, plot=True)
    assert os.path.isfile(os.path.join(out_dir, "ranking.png"))


# ----------------------------------------------------------------------------------------------------------------------
# COMMAND LINE ---------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def test_cli(tmp_path):
    out_dir = str(tmp_path / "cli")
    manifest = str(tmp_path / "manifest.json")

    assert main_ccbench.main(["list-scenarios", "--benchmark", "ccbench2", "--manifest", manifest]) == 0
    assert len(sc.load_manifest(manifest)[0]) == 125

    assert main_ccbench.main(["run", "--schemes", "reno2000", "--out", out_dir]) == 1
    assert main_ccbench.main(["run", "--benchmark", "ccbench1_flat", "--schemes", "newreno,vegas", "--bws", "12",
                              "--min-rtts", "20", "--qs", "1", "--out", out_dir]) == 0
    assert os.path.isfile(os.path.join(out_dir, "results.csv"))

    assert main_ccbench.main(["rank", "--out", out_dir]) == 0
    assert main_ccbench.main(["score", "--out", out_dir, "--alpha", "1"]) == 0
    assert main_ccbench.main(["rank", "--out", str(tmp_path / "missing")]) == 1


@pytest.mark.parametrize("argv", [["run", "--benchmark", "ccbench3"], ["run", "--parallel", "abc"],
                                  ["run", "--bws", "12,x"], []])
def test_cli_usage_errors(argv):
    assert main_ccbench.main(argv) == 1


def test_cli_help():
    assert main_ccbench.main(["--help"]) == 0
