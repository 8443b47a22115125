"""
Harness Module

Orchestrates a benchmark run: materializes the scenario grid (or a pinned manifest), simulates every
(scenario, scheme) cell, scores the flow under test, determines winners and ranks the schemes. Results are persisted
as CSV/JSON files and can be rescored and reported again without simulating.

author: ccbench maintainers
date: 2024
"""

import dataclasses
import hashlib
import json
import logging
import os
import time
from concurrent import futures
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Set, Tuple

import numpy as np
import pandas as pd

import cc_schemes
import helper_funcs
import netsim
import scenarios as sc
import scoring

logger = logging.getLogger(__name__)

TOOL_VERSION = "1.0.0"
BENCHMARKS = ("ccbench1", "ccbench1_flat", "ccbench1_step", "ccbench2")
SWEEP_KINDS = ("buffer", "min_rtt")
MAX_NO_CONCURRENT_JOBS = 200  # limits RAM usage of the waiting queue

REPORT_NOTE = "Each (scenario, scheme) cell is simulated once: the simulator is deterministic, so repeated runs " \
              "of a cell produce identical traces."

GRID_OVERRIDE_KEYS = ("bws_mbps", "min_rtts_ms", "qs_multipliers", "step_multipliers")

DEFAULT_SCORE_PARS = {"no_intervals": scoring.NO_INTERVALS,
                      "winner_margin": scoring.WINNER_MARGIN,
                      "fair_share_epsilon": scoring.FAIR_SHARE_EPSILON}

BENCHMARK_MEMBERS = {"ccbench1": {sc.Benchmark.CCBENCH1_FLAT, sc.Benchmark.CCBENCH1_STEP},
                     "ccbench1_flat": {sc.Benchmark.CCBENCH1_FLAT},
                     "ccbench1_step": {sc.Benchmark.CCBENCH1_STEP},
                     "ccbench2": {sc.Benchmark.CCBENCH2}}

RESULTS_COLUMNS = ["scenario_id", "benchmark", "scheme", "interval", "r_mbps", "d_ms", "f_mbps", "score_kind",
                   "score", "is_winner"]
MEASUREMENTS_COLUMNS = ["scenario_id", "benchmark", "scheme", "flow_id", "interval", "start_s", "end_s", "r_bps",
                        "d_s", "f_bps", "ack_count"]
FAILURES_COLUMNS = ["scenario_id", "scheme", "interval", "result_status", "reason"]


# ----------------------------------------------------------------------------------------------------------------------
# CONFIGURATION --------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

@dataclass
class RunConfig:
    """
    Inputs of a benchmark run. grid holds overrides of the grid sets (bws_mbps, min_rtts_ms, qs_multipliers,
    step_multipliers) on top of grid_pars; qs_multipliers replaces the buffer sets of all benchmarks.
    """
    benchmark: str = "ccbench1"
    schemes: List[str] = field(default_factory=lambda: list(cc_schemes.REQUIRED_ROSTER))
    grid: Dict[str, Any] = field(default_factory=dict)
    alpha: float = 2.0
    parallel: int = 1
    out_dir: Optional[str] = None
    manifest: Optional[str] = None
    grid_pars: Dict[str, Any] = field(default_factory=lambda: dict(sc.DEFAULT_GRID))
    sim_pars: Dict[str, Any] = field(default_factory=lambda: dict(netsim.DEFAULT_SIM_PARS))
    score_pars: Dict[str, Any] = field(default_factory=lambda: dict(DEFAULT_SCORE_PARS))
    run_pars: Dict[str, Any] = field(default_factory=lambda: dict(sc.DEFAULT_DURATIONS))

    @classmethod
    def from_pars(cls, pars: dict, **overrides) -> "RunConfig":
        """Builds a config from an imported parameter file; overrides that are None are ignored."""

        score_pars = dict(DEFAULT_SCORE_PARS)
        score_pars.update(pars.get("score_pars", {}))
        run_pars = dict(sc.DEFAULT_DURATIONS)
        run_pars.update(pars.get("run_pars", {}))
        sim_pars = dict(netsim.DEFAULT_SIM_PARS)
        sim_pars.update(pars.get("sim_pars", {}))
        grid_pars = dict(sc.DEFAULT_GRID)
        grid_pars.update(pars.get("grid_pars", {}))

        config = cls(alpha=score_pars.pop("alpha", 2.0),
                     parallel=run_pars.pop("parallel", 1),
                     out_dir=run_pars.pop("out_dir", None),
                     grid_pars=grid_pars,
                     sim_pars=sim_pars,
                     score_pars=score_pars,
                     run_pars=run_pars)

        for key, value in overrides.items():
            if value is None:
                continue
            if not hasattr(config, key):
                raise ValueError("Unknown run configuration option %s!" % key)
            setattr(config, key, value)

        config.check()
        return config

    def check(self) -> None:
        if self.benchmark not in BENCHMARKS:
            raise ValueError("Unknown benchmark %s, choose from %s!" % (self.benchmark, ", ".join(BENCHMARKS)))

        if not self.schemes:
            raise ValueError("At least one scheme is required!")

        unknown = [scheme for scheme in self.schemes if scheme not in cc_schemes.roster()]
        if unknown:
            raise ValueError("Unknown scheme(s) %s, available: %s" % (", ".join(unknown),
                                                                        ", ".join(cc_schemes.roster())))

        if len(set(self.schemes)) != len(self.schemes):
            raise ValueError("Scheme list contains duplicates!")

        if not isinstance(self.parallel, int) or self.parallel < 1:
            raise ValueError("Parallelism must be an integer >= 1!")

        if not self.alpha > 0.0:
            raise ValueError("alpha must be positive!")

        for key, value in self.grid.items():
            if key not in GRID_OVERRIDE_KEYS:
                raise ValueError("Unknown grid override %s, choose from %s!" % (key, ", ".join(GRID_OVERRIDE_KEYS)))
            if not value or any(not v > 0.0 for v in value):
                raise ValueError("Grid override %s must be a nonempty list of positive values!" % key)

    def effective_grid(self) -> dict:
        grid = dict(self.grid_pars)

        for key, value in self.grid.items():
            if key == "qs_multipliers":
                grid["qs_multipliers_flat"] = list(value)
                grid["qs_multipliers_ccbench2"] = list(value)
            else:
                grid[key] = list(value)

            if key == "bws_mbps":
                grid["step_bws_mbps"] = grid_step_candidates(value)

        return grid

    def hash_inputs(self) -> dict:
        """Everything that determines the results; parallelism and output location do not."""

        return {"benchmark": self.benchmark,
                "schemes": list(self.schemes),
                "grid": self.effective_grid(),
                "alpha": self.alpha,
                "sim_pars": self.sim_pars,
                "score_pars": self.score_pars,
                "run_pars": self.run_pars}


def grid_step_candidates(bws_mbps: List[float]) -> List[float]:
    """Step scenarios start from every capacity of the override set except the largest one."""
    return sorted(bws_mbps)[:-1] if len(bws_mbps) > 1 else list(bws_mbps)


def config_hash(config: RunConfig, scenario_list: List[sc.Scenario]) -> str:
    payload = {"config": config.hash_inputs(),
               "scenarios": [sc.scenario_to_dict(scenario) for scenario in scenario_list]}
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8")).hexdigest()


# ----------------------------------------------------------------------------------------------------------------------
# SINGLE CELL ----------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

@dataclass
class CellResult:
    """
    Outcome of simulating one (scenario, scheme) cell. result_status: 0 = valid, 1 = the flow under test stalled,
    -1 = exception while simulating.
    """
    scenario_id: str
    scheme: str
    benchmark: str
    result_status: int
    error: str = ""
    stall_time: Optional[float] = None
    measurements: List[scoring.IntervalMeasurement] = field(default_factory=list)
    traces: List[dict] = field(default_factory=list)

    def failed_intervals(self, no_intervals: int) -> Dict[int, str]:
        """interval index -> reason for every interval that must not be scored"""

        if self.result_status == -1:
            return {i: "exception: %s" % self.error for i in range(no_intervals)}

        if self.result_status == 1:
            return {meas.interval_index: "stalled at %.3fs" % self.stall_time
                    for meas in self.measurements if meas.end > self.stall_time}

        return {}


def _trace_summary(scenario: sc.Scenario, scheme: str, trace: netsim.FlowTrace) -> dict:
    mean_rtt = trace.mean_rtt()

    return {"scenario_id": scenario.id,
            "scheme": scheme,
            "flow_id": trace.flow_id,
            "flow_scheme": trace.scheme,
            "start_s": trace.start_time,
            "stop_s": trace.stop_time,
            "bytes_sent": trace.bytes_sent,
            "bytes_acked": trace.bytes_acked,
            "bytes_dropped": trace.bytes_dropped,
            "drop_count": trace.drop_count,
            "bytes_in_flight_end": trace.bytes_in_flight_end,
            "loss_events": trace.loss_events,
            "timeout_events": trace.timeout_events,
            "goodput_mbps": trace.goodput() / 1e6,
            "mean_rtt_ms": mean_rtt * 1e3 if mean_rtt is not None else None,
            "stalled": trace.stalled,
            "stall_time_s": trace.stall_time}


def simulate_cell(scenario: sc.Scenario, scheme: str, sim_pars: Optional[dict] = None,
                  no_intervals: int = scoring.NO_INTERVALS) -> CellResult:
    """Simulates one cell and measures the flow under test. Never raises: failures are reported in result_status."""

    scenario = scenario.with_scheme(scheme)
    mss = (sim_pars or {}).get("mss_bytes", netsim.MSS)

    try:
        flows = [(cc_schemes.make_scheme(flow.scheme, mss=mss), flow.start_time, scenario.duration)
                 for flow in scenario.flows]
        traces = netsim.simulate(scenario.link, flows, sim_pars=sim_pars)
        measurements = scoring.interval_measurements(traces[-1], scenario, no_intervals)

    except Exception as exc:
        logger.warning("Cell %s / %s failed: %r" % (scenario.id, scheme, exc))
        return CellResult(scenario_id=scenario.id,
                          scheme=scheme,
                          benchmark=scenario.benchmark.value,
                          result_status=-1,
                          error=repr(exc))

    # only the flow under test decides the status, a stalled competitor leaves its intervals scorable
    under_test = traces[-1]

    for trace in traces[:-1]:
        if trace.stalled:
            logger.warning("Cell %s / %s: competing flow %i stalled at %.3fs"
                           % (scenario.id, scheme, trace.flow_id, trace.stall_time))

    if under_test.stalled:
        logger.warning("Cell %s / %s: flow stalled at %.3fs" % (scenario.id, scheme, under_test.stall_time))

    return CellResult(scenario_id=scenario.id,
                      scheme=scheme,
                      benchmark=scenario.benchmark.value,
                      result_status=1 if under_test.stalled else 0,
                      stall_time=under_test.stall_time if under_test.stalled else None,
                      measurements=measurements,
                      traces=[_trace_summary(scenario, scheme, trace) for trace in traces])


def execute_cells(cells: List[Tuple[sc.Scenario, str]], sim_pars: Optional[dict] = None,
                  no_intervals: int = scoring.NO_INTERVALS, parallel: int = 1, use_print: bool = False) \
        -> List[CellResult]:
    """Simulates all cells, in process or on a pool of parallel worker processes. Results are sorted by cell key."""

    if use_print:
        logger.info("Starting %i simulations on %i worker(s)..." % (len(cells), parallel))
    t_start = time.perf_counter()

    results = []

    # SINGLE PROCESS ---------------------------------------------------------------------------------------------------
    if parallel == 1:
        for i, (scenario, scheme) in enumerate(cells):
            results.append(simulate_cell(scenario, scheme, sim_pars, no_intervals))

            if use_print:
                helper_funcs.progressbar(i=i + 1, i_total=len(cells), prefix="INFO: Simulation progress:")

    # MULTIPLE PROCESSES -----------------------------------------------------------------------------------------------
    else:
        no_submitted = 0

        with futures.ProcessPoolExecutor(max_workers=parallel) as executor:

            while no_submitted < len(cells):
                job_queue = []

                while len(job_queue) < MAX_NO_CONCURRENT_JOBS and no_submitted < len(cells):
                    scenario, scheme = cells[no_submitted]
                    job_queue.append(executor.submit(simulate_cell, scenario, scheme, sim_pars, no_intervals))
                    no_submitted += 1

                for job_handle in futures.as_completed(job_queue):
                    results.append(job_handle.result())

                if use_print:
                    helper_funcs.progressbar(i=len(results), i_total=len(cells), prefix="INFO: Simulation progress:")

    results.sort(key=lambda res: (res.scenario_id, res.scheme))

    no_invalid = sum(1 for res in results if res.result_status != 0)
    if no_invalid:
        logger.warning("There were %i cells with stalled flows or errors!" % no_invalid)

    if use_print:
        runtime = time.perf_counter() - t_start
        logger.info("Simulation runtime: {:.3f}s ({:.3f}ms per cell)".format(runtime,
                                                                              runtime / max(len(cells), 1) * 1000))

    return results


# ----------------------------------------------------------------------------------------------------------------------
# RESULTS BUNDLE -------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

@dataclass
class ResultsBundle:
    benchmark: str
    schemes: List[str]
    alpha: float
    score_pars: Dict[str, Any]
    scenarios: List[sc.Scenario]
    manifest_meta: Dict[str, Any]
    measurements: pd.DataFrame
    traces: pd.DataFrame
    failures: pd.DataFrame
    records: List[scoring.ScoreRecord] = field(default_factory=list)
    winners: Dict[Tuple[str, int, scoring.ScoreKind], Set[str]] = field(default_factory=dict)
    ranking: Optional[scoring.Ranking] = None
    tool_version: str = TOOL_VERSION
    config_hash: str = ""
    timestamp: str = ""

    @property
    def partial(self) -> bool:
        return not self.failures.empty

    def results_frame(self) -> pd.DataFrame:
        benchmarks = {scenario.id: scenario.benchmark.value for scenario in self.scenarios}
        rows = [{"scenario_id": rec.scenario_id,
                 "benchmark": benchmarks[rec.scenario_id],
                 "scheme": rec.scheme,
                 "interval": rec.interval_index,
                 "r_mbps": rec.r_mbps,
                 "d_ms": rec.d_ms,
                 "f_mbps": rec.fair_share,
                 "score_kind": rec.kind.value,
                 "score": rec.value,
                 "is_winner": rec.scheme in self.winners.get(rec.cell, set())}
                for rec in self.records]

        return pd.DataFrame(rows, columns=RESULTS_COLUMNS)


def _score_kind(scenario: sc.Scenario) -> scoring.ScoreKind:
    if scenario.benchmark is sc.Benchmark.CCBENCH2:
        return scoring.ScoreKind.FRIENDLINESS
    return scoring.ScoreKind.POWER


def _measurement_rows(cell: CellResult) -> List[dict]:
    return [{"scenario_id": cell.scenario_id,
             "benchmark": cell.benchmark,
             "scheme": cell.scheme,
             "flow_id": meas.flow_id,
             "interval": meas.interval_index,
             "start_s": meas.start,
             "end_s": meas.end,
             "r_bps": meas.r,
             "d_s": meas.d,
             "f_bps": meas.f,
             "ack_count": meas.ack_count}
            for meas in cell.measurements]


def _none_if_nan(value) -> Optional[float]:
    return None if value is None or (isinstance(value, float) and np.isnan(value)) else float(value)


def score_bundle(bundle: ResultsBundle) -> ResultsBundle:
    """(Re)computes records, winner sets and ranking of a bundle from its measurements and failure log."""

    no_intervals = bundle.score_pars["no_intervals"]
    scenarios_by_id = {scenario.id: scenario for scenario in bundle.scenarios}
    failed = {(row.scenario_id, row.scheme, int(row.interval)) for row in bundle.failures.itertuples(index=False)}

    records = []
    meas_sorted = bundle.measurements.sort_values(["scenario_id", "scheme", "interval"], kind="mergesort")

    for row in meas_sorted.itertuples(index=False):
        if (row.scenario_id, row.scheme, int(row.interval)) in failed:
            continue

        scenario = scenarios_by_id[row.scenario_id]
        meas = scoring.IntervalMeasurement(flow_id=int(row.flow_id),
                                           interval_index=int(row.interval),
                                           start=float(row.start_s),
                                           end=float(row.end_s),
                                           r=float(row.r_bps),
                                           d=_none_if_nan(row.d_s),
                                           f=_none_if_nan(row.f_bps),
                                           ack_count=int(row.ack_count))
        records.extend(scoring.score_records([meas], row.scenario_id, row.scheme, _score_kind(scenario),
                                             bundle.alpha))

    by_cell = {}
    for rec in records:
        by_cell.setdefault(rec.cell, []).append(rec)

    # every (scenario, interval) is a cell, also if no scheme produced a valid record for it
    winner_sets = {}
    for scenario in sorted(bundle.scenarios, key=lambda x: x.id):
        for i in range(no_intervals):
            cell = (scenario.id, i, _score_kind(scenario))
            winner_sets[cell] = scoring.winners(by_cell.get(cell, []),
                                                margin=bundle.score_pars["winner_margin"],
                                                epsilon=bundle.score_pars["fair_share_epsilon"])

    ranking = scoring.rank({scheme: scoring.winning_rate(winner_sets, scheme) for scheme in bundle.schemes}) \
        if winner_sets else None

    return dataclasses.replace(bundle, records=records, winners=winner_sets, ranking=ranking)


def rescore(bundle: ResultsBundle, alpha: Optional[float] = None) -> ResultsBundle:
    if alpha is not None:
        if not alpha > 0.0:
            raise ValueError("alpha must be positive!")
        bundle = dataclasses.replace(bundle, alpha=alpha)

    return score_bundle(bundle)


# ----------------------------------------------------------------------------------------------------------------------
# RUN ------------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def _prepare_out_dir(out_dir: str) -> None:
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        raise ValueError("Output directory %s cannot be created: %s" % (out_dir, exc))

    if not os.access(out_dir, os.W_OK):
        raise ValueError("Output directory %s is not writable!" % out_dir)


def materialize_scenarios(config: RunConfig) -> Tuple[List[sc.Scenario], dict]:
    """Scenario list of a run and the manifest metadata, from the pinned manifest if one is configured."""

    grid = config.effective_grid()
    meta = {"benchmark": config.benchmark, "grid": grid}

    if config.manifest is None:
        scenario_list = sc.build_benchmark(config.benchmark, grid=grid, durations=config.run_pars)
        return sorted(scenario_list, key=lambda x: x.id), meta

    scenario_list, manifest_meta = sc.load_manifest(config.manifest)

    wrong = [scenario.id for scenario in scenario_list
             if scenario.benchmark not in BENCHMARK_MEMBERS[config.benchmark]]
    if wrong:
        raise ValueError("Manifest/grid mismatch: scenario %s does not belong to benchmark %s!"
                         % (wrong[0], config.benchmark))

    if config.grid and "grid" in manifest_meta and manifest_meta["grid"] != grid:
        raise ValueError("Manifest/grid mismatch: the grid overrides differ from the grid stored in %s!"
                         % config.manifest)

    meta.update(manifest_meta)
    return sorted(scenario_list, key=lambda x: x.id), meta


def run(config: RunConfig, use_print: bool = False) -> ResultsBundle:
    """Simulates, scores and ranks every (scenario, scheme) cell of the configured benchmark."""

    config.check()

    if config.out_dir is not None:
        _prepare_out_dir(config.out_dir)

    scenario_list, meta = materialize_scenarios(config)
    cells = [(scenario, scheme) for scenario in scenario_list for scheme in config.schemes]
    no_intervals = config.score_pars["no_intervals"]

    logger.info("Benchmark %s: %i scenarios x %i schemes" % (config.benchmark, len(scenario_list),
                                                             len(config.schemes)))

    cell_results = execute_cells(cells, config.sim_pars, no_intervals, config.parallel, use_print)

    measurement_rows = []
    trace_rows = []
    failure_rows = []

    for cell in cell_results:
        measurement_rows.extend(_measurement_rows(cell))
        trace_rows.extend(cell.traces)

        for interval, reason in sorted(cell.failed_intervals(no_intervals).items()):
            failure_rows.append({"scenario_id": cell.scenario_id,
                                 "scheme": cell.scheme,
                                 "interval": interval,
                                 "result_status": cell.result_status,
                                 "reason": reason})

    bundle = ResultsBundle(benchmark=config.benchmark,
                           schemes=list(config.schemes),
                           alpha=config.alpha,
                           score_pars=dict(config.score_pars),
                           scenarios=scenario_list,
                           manifest_meta=meta,
                           measurements=pd.DataFrame(measurement_rows, columns=MEASUREMENTS_COLUMNS),
                           traces=pd.DataFrame(trace_rows),
                           failures=pd.DataFrame(failure_rows, columns=FAILURES_COLUMNS),
                           config_hash=config_hash(config, scenario_list),
                           timestamp=time.strftime("%Y-%m-%dT%H:%M:%S"))

    bundle = score_bundle(bundle)

    if bundle.partial:
        logger.warning("%i (scenario, scheme, interval) cells failed, see failures.csv" % len(bundle.failures))

    if config.out_dir is not None:
        save_bundle(bundle, config.out_dir)

    return bundle


# ----------------------------------------------------------------------------------------------------------------------
# PERSISTENCE ----------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def save_bundle(bundle: ResultsBundle, out_dir: str) -> None:
    _prepare_out_dir(out_dir)

    sc.save_manifest(bundle.scenarios, os.path.join(out_dir, "manifest.json"), bundle.manifest_meta)
    bundle.results_frame().to_csv(os.path.join(out_dir, "results.csv"), index=False)
    bundle.failures.to_csv(os.path.join(out_dir, "failures.csv"), index=False)
    bundle.measurements.to_csv(os.path.join(out_dir, "measurements.csv"), index=False)
    bundle.traces.to_csv(os.path.join(out_dir, "traces.csv"), index=False)

    if bundle.ranking is not None:
        bundle.ranking.to_frame().to_csv(os.path.join(out_dir, "ranking.csv"), index=False)

    with open(os.path.join(out_dir, "bundle.json"), "w") as fh:
        json.dump({"tool_version": bundle.tool_version,
                   "config_hash": bundle.config_hash,
                   "timestamp": bundle.timestamp,
                   "benchmark": bundle.benchmark,
                   "schemes": bundle.schemes,
                   "alpha": bundle.alpha,
                   "score_pars": bundle.score_pars}, fh, indent=1, sort_keys=True)


def _read_csv(path: str, columns: Optional[List[str]] = None) -> pd.DataFrame:
    if not os.path.isfile(path):
        raise RuntimeError("Results file %s does not exist!" % path)

    try:
        frame = pd.read_csv(path, float_precision="round_trip")
    except pd.errors.EmptyDataError:
        frame = pd.DataFrame(columns=columns)

    return frame


def load_bundle(out_dir: str) -> ResultsBundle:
    """Reads a stored bundle and rescores it with the stored alpha."""

    bundle_file = os.path.join(out_dir, "bundle.json")

    if not os.path.isfile(bundle_file):
        raise RuntimeError("No results bundle found in %s!" % out_dir)

    with open(bundle_file, "r") as fh:
        info = json.load(fh)

    scenario_list, meta = sc.load_manifest(os.path.join(out_dir, "manifest.json"))

    bundle = ResultsBundle(benchmark=info["benchmark"],
                           schemes=list(info["schemes"]),
                           alpha=info["alpha"],
                           score_pars=info["score_pars"],
                           scenarios=scenario_list,
                           manifest_meta=meta,
                           measurements=_read_csv(os.path.join(out_dir, "measurements.csv"), MEASUREMENTS_COLUMNS),
                           traces=_read_csv(os.path.join(out_dir, "traces.csv")),
                           failures=_read_csv(os.path.join(out_dir, "failures.csv"), FAILURES_COLUMNS),
                           tool_version=info["tool_version"],
                           config_hash=info["config_hash"],
                           timestamp=info["timestamp"])

    return score_bundle(bundle)


# ----------------------------------------------------------------------------------------------------------------------
# REPORT ---------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def score_series(bundle: ResultsBundle) -> pd.DataFrame:
    """
    Mean interval score per (scenario, scheme) together with the scenario coordinates, one row each. Buffer sweeps
    are the rows of a fixed (bw_mbps, min_rtt_ms) ordered by queue_bytes, min-RTT sweeps the rows of a fixed
    (bw_mbps, qs_multiplier) ordered by min_rtt_ms.
    """

    scenarios_by_id = {scenario.id: scenario for scenario in bundle.scenarios}
    per_cell = {}

    for rec in bundle.records:
        per_cell.setdefault((rec.scenario_id, rec.scheme), []).append(rec)

    rows = []
    for (scenario_id, scheme), recs in sorted(per_cell.items()):
        params = scenarios_by_id[scenario_id].params
        rows.append({"scenario_id": scenario_id,
                     "benchmark": scenarios_by_id[scenario_id].benchmark.value,
                     "bw_mbps": params.get("bw_mbps"),
                     "min_rtt_ms": params.get("min_rtt_ms"),
                     "qs_multiplier": params.get("qs_multiplier"),
                     "m": params.get("m"),
                     "queue_bytes": params.get("queue_bytes"),
                     "scheme": scheme,
                     "score_kind": recs[0].kind.value,
                     "score": scoring.mean_score(recs)})

    return pd.DataFrame(rows, columns=["scenario_id", "benchmark", "bw_mbps", "min_rtt_ms", "qs_multiplier", "m",
                                       "queue_bytes", "scheme", "score_kind", "score"])


def report(bundle: ResultsBundle, out_dir: Optional[str] = None, plot: bool = False) \
        -> Tuple[pd.DataFrame, pd.DataFrame]:
    """Ranking table and plot-ready score series of a bundle; written to out_dir if given."""

    if not bundle.scenarios or bundle.ranking is None:
        raise ValueError("Cannot report on an empty results bundle!")

    ranking_frame = bundle.ranking.to_frame()
    series = score_series(bundle)

    if out_dir is not None:
        _prepare_out_dir(out_dir)
        ranking_frame.to_csv(os.path.join(out_dir, "ranking.csv"), index=False)
        series.to_csv(os.path.join(out_dir, "series.csv"), index=False)

        with open(os.path.join(out_dir, "report.txt"), "w") as fh:
            fh.write("%s\n\n" % REPORT_NOTE)
            fh.write("benchmark: %s, alpha: %g, config hash: %s\n\n" % (bundle.benchmark, bundle.alpha,
                                                                       bundle.config_hash))
            fh.write(ranking_frame.to_string(index=False))
            fh.write("\n")

        if plot:
            import ccbench_visualizer
            visualizer = ccbench_visualizer.CcBenchVisualizer(output_dir=out_dir)
            visualizer.plot_ranking(bundle.ranking, title="Winning rates %s" % bundle.benchmark)

    return ranking_frame, series


# ----------------------------------------------------------------------------------------------------------------------
# SWEEPS ---------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def sweep(kind: str, schemes: List[str], bw_mbps: float = 48.0, min_rtt_ms: float = 40.0, qs_multiplier: float = 5.0,
          points: Optional[List[float]] = None, duration: float = 30.0, alpha: float = 2.0, parallel: int = 1,
          sim_pars: Optional[dict] = None, out_dir: Optional[str] = None, plot: bool = False,
          use_print: bool = False) -> pd.DataFrame:
    """
    Buffer sweep (points in kB at fixed bw_mbps / min_rtt_ms) or min-RTT sweep (points in ms at fixed bw_mbps /
    qs_multiplier). Returns one row per (scheme, point) with the mean power score over the intervals.
    """

    if kind not in SWEEP_KINDS:
        raise ValueError("Unknown sweep kind %s, choose from %s!" % (kind, ", ".join(SWEEP_KINDS)))

    RunConfig(schemes=list(schemes), alpha=alpha, parallel=parallel).check()

    if kind == "buffer":
        pts = tuple(points) if points else (64.0, 128.0, 256.0, 512.0, 1024.0)
        scenario_list = sc.build_buffer_sweep(bw_mbps, min_rtt_ms, pts, duration)
    else:
        pts = tuple(points) if points else (20.0, 40.0, 60.0, 80.0, 120.0)
        scenario_list = sc.build_min_rtt_sweep(bw_mbps, qs_multiplier, pts, duration)

    x_by_id = dict(zip([scenario.id for scenario in scenario_list], pts))
    cells = [(scenario, scheme) for scenario in scenario_list for scheme in schemes]
    cell_results = execute_cells(cells, sim_pars, scoring.NO_INTERVALS, parallel, use_print)

    rows = []
    for cell in cell_results:
        failed = cell.failed_intervals(scoring.NO_INTERVALS)
        meas = [m for m in cell.measurements if m.interval_index not in failed]
        recs = scoring.score_records(meas, cell.scenario_id, cell.scheme, scoring.ScoreKind.POWER, alpha)
        rows.append({"kind": kind,
                     "x": x_by_id[cell.scenario_id],
                     "scheme": cell.scheme,
                     "score": scoring.mean_score(recs),
                     "result_status": cell.result_status})

    series = pd.DataFrame(rows, columns=["kind", "x", "scheme", "score", "result_status"])
    series = series.sort_values(["scheme", "x"], kind="mergesort").reset_index(drop=True)

    if out_dir is not None:
        _prepare_out_dir(out_dir)
        series.to_csv(os.path.join(out_dir, "sweep_%s.csv" % kind), index=False)

        if plot:
            import ccbench_visualizer
            visualizer = ccbench_visualizer.CcBenchVisualizer(output_dir=out_dir)
            visualizer.plot_sweep(series, kind)

    return series
