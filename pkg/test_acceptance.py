"""
Long-running qualitative checks of the schemes on full-length scenarios. Deselected by default, run with
pytest -m slow.
"""

import pytest

import harness
import scenarios as sc
import scoring

pytestmark = pytest.mark.slow


def _flat_scenario(qs: float = 2.0) -> sc.Scenario:
    return sc.build_ccbench1_flat(grid={"bws_mbps": [48.0], "min_rtts_ms": [40.0], "qs_multipliers_flat": [qs]})[0]


def test_cubic_saturates_and_vegas_keeps_queue_short():
    scenario = _flat_scenario()

    cubic = harness.simulate_cell(scenario, "cubic")
    vegas = harness.simulate_cell(scenario, "vegas")
    assert cubic.result_status == 0 and vegas.result_status == 0

    utilization = cubic.traces[0]["bytes_acked"] * 8.0 / scenario.duration / 48e6
    assert 0.85 <= utilization <= 1.0

    cubic_queueing = cubic.traces[0]["mean_rtt_ms"] - 40.0
    vegas_queueing = vegas.traces[0]["mean_rtt_ms"] - 40.0
    assert vegas_queueing < 0.25 * cubic_queueing


def test_buffer_sweep_crossover():
    series = harness.sweep("buffer", ["cubic", "ledbat"], bw_mbps=48.0, min_rtt_ms=40.0)
    score = {(row.scheme, row.x): row.score for row in series.itertuples(index=False)}

    # loss-based wins on shallow buffers, the delay target wins once the buffer is deep
    assert score[("cubic", 64.0)] > score[("ledbat", 64.0)]
    assert score[("ledbat", 1024.0)] > score[("cubic", 1024.0)]


def test_min_rtt_sweep_crossover():
    series = harness.sweep("min_rtt", ["vegas", "bbr_lite"], bw_mbps=48.0, qs_multiplier=5.0)
    score = {(row.scheme, row.x): row.score for row in series.itertuples(index=False)}

    assert score[("vegas", 20.0)] > score[("bbr_lite", 20.0)]
    assert score[("bbr_lite", 120.0)] > score[("vegas", 120.0)]


def _self_fairness_records(qs: float) -> list:
    scenario = sc.build_ccbench2("cubic", grid={"bws_mbps": [48.0], "min_rtts_ms": [40.0],
                                                "qs_multipliers_ccbench2": [qs]})[0]

    cell = harness.simulate_cell(scenario, "cubic")
    assert cell.result_status == 0

    return scoring.score_records(cell.measurements, scenario.id, "cubic", scoring.ScoreKind.FRIENDLINESS)


@pytest.mark.parametrize("qs", [1.0, 2.0, 4.0])
def test_cubic_self_fairness(qs):
    recs = _self_fairness_records(qs)

    assert recs[-1].fair_share == pytest.approx(24.0)
    assert recs[-1].value <= 0.2 * recs[-1].fair_share


def test_cubic_converges_slower_in_deeper_buffers():
    first_fair_interval = []

    for qs in (1.0, 2.0, 4.0):
        recs = _self_fairness_records(qs)
        first_fair_interval.append(next(rec.interval_index for rec in recs if rec.value <= 0.2 * rec.fair_share))

    assert first_fair_interval == sorted(first_fair_interval)


def test_no_scheme_wins_everything():
    bundle = harness.run(harness.RunConfig(benchmark="ccbench1", parallel=4))

    assert len(bundle.scenarios) == 600
    assert all(rate < 100.0 for _, rate in bundle.ranking.entries)
