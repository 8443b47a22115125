"""
Scenarios Module

Builds the benchmark scenario grids:
    - ccbench1_flat:  single flow, constant capacity, 30 s
    - ccbench1_step:  single flow, capacity alternating BW1 / m * BW1 every 7 s (BW1 first), 30 s
    - ccbench2:       Cubic at 0 s plus the flow under test at 10 s, constant capacity, 120 s
    - sweep:          single flow sweeps over the buffer size or the min RTT at fixed capacity

Scenarios are plain frozen dataclasses and can be pinned to a JSON manifest with every parameter explicit.

author: ccbench maintainers
date: 2024
"""

import dataclasses
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import cc_schemes
from netsim import MSS, BandwidthTrace, LinkConfig

logger = logging.getLogger(__name__)

SCHEME_UNDER_TEST = "scheme-under-test"
STEP_ORDER = "bw1_first"

# defaults, identical to [GRID_PARS] / [RUN_PARS] of input/pars_ccbench.ini
DEFAULT_GRID = {"bws_mbps": [12.0, 24.0, 48.0, 96.0, 192.0],
                "min_rtts_ms": [10.0, 20.0, 40.0, 80.0, 160.0],
                "qs_multipliers_flat": [0.5, 1.0, 2.0, 4.0, 8.0, 16.0],
                "qs_multipliers_ccbench2": [1.0, 2.0, 4.0, 8.0, 16.0],
                "step_bws_mbps": [12.0, 24.0, 48.0, 96.0],
                "step_multipliers": [0.25, 0.5, 2.0, 4.0],
                "step_period_s": 7.0,
                "bw_cap_mbps": 200.0}

DEFAULT_DURATIONS = {"ccbench1_duration_s": 30.0,
                     "ccbench2_duration_s": 120.0,
                     "ccbench2_stagger_s": 10.0}


class Benchmark(Enum):
    CCBENCH1_FLAT = "ccbench1_flat"
    CCBENCH1_STEP = "ccbench1_step"
    CCBENCH2 = "ccbench2"
    SWEEP = "sweep"


@dataclass(frozen=True)
class FlowSpec:
    scheme: str  # scheme id or SCHEME_UNDER_TEST
    start_time: float  # [s]


@dataclass(frozen=True)
class Scenario:
    """
    One benchmark scenario. The flow under test is always the last flow. params holds the grid coordinates
    (bw_mbps, min_rtt_ms, qs_multiplier, m, queue_bytes) used for sweeps and reports.
    """
    id: str
    benchmark: Benchmark
    link: LinkConfig
    duration: float  # [s] every flow stops sending at this time
    flows: Tuple[FlowSpec, ...]
    params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "flows", tuple(self.flows))

        if not self.duration > 0.0:
            raise ValueError("Scenario %s: duration must be positive!" % self.id)

        if self.benchmark is Benchmark.CCBENCH2:
            if len(self.flows) != 2 or self.flows[0].scheme != "cubic" \
                    or not self.flows[0].start_time < self.flows[1].start_time:
                raise ValueError("Scenario %s: ccbench2 needs a cubic flow followed by a later flow!" % self.id)
        elif len(self.flows) != 1:
            raise ValueError("Scenario %s: single-flow benchmarks need exactly one flow!" % self.id)

    @property
    def scheme_under_test(self) -> str:
        return self.flows[-1].scheme

    @property
    def measurement_window(self) -> Tuple[float, float]:
        """[start, end] of the scored period: from the arrival of the flow under test until the end of the run."""
        return self.flows[-1].start_time, self.duration

    def with_scheme(self, scheme: str) -> "Scenario":
        flows = tuple(FlowSpec(scheme, f.start_time) if f.scheme == SCHEME_UNDER_TEST else f for f in self.flows)
        return dataclasses.replace(self, flows=flows)


# ----------------------------------------------------------------------------------------------------------------------
# HELPERS --------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def bdp_bytes(bw: float, min_rtt: float) -> float:
    """Bandwidth-delay product [B] of bw [bit/s] and min_rtt [s]."""

    if not bw > 0.0 or not min_rtt > 0.0:
        raise ValueError("Bandwidth and minimum RTT must be positive!")

    return bw * min_rtt / 8.0


def scenario_id(benchmark: Benchmark, bw_mbps: float, min_rtt_ms: float, qs: float, m: Optional[float] = None) -> str:
    sid = "%s_bw%g_rtt%g_qs%g" % (benchmark.value, bw_mbps, min_rtt_ms, qs)
    if m is not None:
        sid += "_m%g" % m
    return sid


def _queue_bytes(qs_multiplier: float, bw_mbps: float, min_rtt_ms: float) -> int:
    return max(int(round(qs_multiplier * bdp_bytes(bw_mbps * 1e6, min_rtt_ms / 1e3))), MSS)


def _merge_grid(grid: Optional[dict]) -> dict:
    merged = dict(DEFAULT_GRID)
    merged.update(grid or {})
    return merged


# ----------------------------------------------------------------------------------------------------------------------
# CC-BENCH1 ------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def build_ccbench1_flat(grid: Optional[dict] = None, duration: float = 30.0) -> List[Scenario]:
    grid = _merge_grid(grid)
    scenarios = []

    for bw in grid["bws_mbps"]:
        for rtt in grid["min_rtts_ms"]:
            for qs in grid["qs_multipliers_flat"]:
                queue_bytes = _queue_bytes(qs, bw, rtt)
                link = LinkConfig(trace=BandwidthTrace.flat(bw * 1e6, horizon=duration),
                                  min_rtt=rtt / 1e3,
                                  queue_capacity=queue_bytes)
                scenarios.append(Scenario(id=scenario_id(Benchmark.CCBENCH1_FLAT, bw, rtt, qs),
                                          benchmark=Benchmark.CCBENCH1_FLAT,
                                          link=link,
                                          duration=duration,
                                          flows=(FlowSpec(SCHEME_UNDER_TEST, 0.0),),
                                          params={"bw_mbps": bw, "min_rtt_ms": rtt, "qs_multiplier": qs,
                                                  "queue_bytes": queue_bytes}))

    return scenarios


def build_ccbench1_step(grid: Optional[dict] = None, duration: float = 30.0) -> List[Scenario]:
    """
    Step scenarios: the capacity starts at BW1 and alternates with m * BW1 every step_period_s. Combinations whose
    second capacity exceeds bw_cap_mbps are skipped. The buffer is sized on the BDP of BW1.
    """

    grid = _merge_grid(grid)
    scenarios = []

    for bw1 in grid["step_bws_mbps"]:
        for m in grid["step_multipliers"]:
            if m * bw1 > grid["bw_cap_mbps"]:
                logger.debug("Skipping step scenario BW1=%g Mbps, m=%g: above the capacity cap" % (bw1, m))
                continue

            for rtt in grid["min_rtts_ms"]:
                for qs in grid["qs_multipliers_flat"]:
                    queue_bytes = _queue_bytes(qs, bw1, rtt)
                    trace = BandwidthTrace.step(bw1 * 1e6, m, period=grid["step_period_s"], horizon=duration)
                    link = LinkConfig(trace=trace, min_rtt=rtt / 1e3, queue_capacity=queue_bytes)
                    scenarios.append(Scenario(id=scenario_id(Benchmark.CCBENCH1_STEP, bw1, rtt, qs, m),
                                              benchmark=Benchmark.CCBENCH1_STEP,
                                              link=link,
                                              duration=duration,
                                              flows=(FlowSpec(SCHEME_UNDER_TEST, 0.0),),
                                              params={"bw_mbps": bw1, "min_rtt_ms": rtt, "qs_multiplier": qs,
                                                      "m": m, "queue_bytes": queue_bytes}))

    return scenarios


def build_ccbench1(grid: Optional[dict] = None, duration: float = 30.0) -> List[Scenario]:
    return build_ccbench1_flat(grid, duration) + build_ccbench1_step(grid, duration)


# ----------------------------------------------------------------------------------------------------------------------
# CC-BENCH2 ------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def build_ccbench2(scheme_under_test: str = SCHEME_UNDER_TEST, grid: Optional[dict] = None, duration: float = 120.0,
                   stagger: float = 10.0) -> List[Scenario]:
    """Friendliness scenarios: Cubic enters at 0 s, the flow under test at stagger seconds."""

    if scheme_under_test != SCHEME_UNDER_TEST and scheme_under_test not in cc_schemes.roster():
        raise ValueError("Unknown scheme under test %s!" % scheme_under_test)

    grid = _merge_grid(grid)
    scenarios = []

    for bw in grid["bws_mbps"]:
        for rtt in grid["min_rtts_ms"]:
            for qs in grid["qs_multipliers_ccbench2"]:
                queue_bytes = _queue_bytes(qs, bw, rtt)
                link = LinkConfig(trace=BandwidthTrace.flat(bw * 1e6, horizon=duration),
                                  min_rtt=rtt / 1e3,
                                  queue_capacity=queue_bytes)
                scenarios.append(Scenario(id=scenario_id(Benchmark.CCBENCH2, bw, rtt, qs),
                                          benchmark=Benchmark.CCBENCH2,
                                          link=link,
                                          duration=duration,
                                          flows=(FlowSpec("cubic", 0.0), FlowSpec(scheme_under_test, stagger)),
                                          params={"bw_mbps": bw, "min_rtt_ms": rtt, "qs_multiplier": qs,
                                                  "queue_bytes": queue_bytes}))

    return scenarios


# ----------------------------------------------------------------------------------------------------------------------
# SWEEPS ---------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def build_buffer_sweep(bw_mbps: float = 48.0, min_rtt_ms: float = 40.0,
                       buffers_kb: Tuple[float, ...] = (64.0, 128.0, 256.0, 512.0, 1024.0),
                       duration: float = 30.0) -> List[Scenario]:
    """Single flow at fixed capacity and min RTT, buffer given in kB (1 kB = 1000 B)."""

    scenarios = []

    for kb in buffers_kb:
        queue_bytes = int(round(kb * 1000.0))
        link = LinkConfig(trace=BandwidthTrace.flat(bw_mbps * 1e6, horizon=duration),
                          min_rtt=min_rtt_ms / 1e3,
                          queue_capacity=queue_bytes)
        scenarios.append(Scenario(id="sweep_bw%g_rtt%g_buf%gkB" % (bw_mbps, min_rtt_ms, kb),
                                  benchmark=Benchmark.SWEEP,
                                  link=link,
                                  duration=duration,
                                  flows=(FlowSpec(SCHEME_UNDER_TEST, 0.0),),
                                  params={"bw_mbps": bw_mbps, "min_rtt_ms": min_rtt_ms,
                                          "qs_multiplier": queue_bytes / bdp_bytes(bw_mbps * 1e6, min_rtt_ms / 1e3),
                                          "queue_bytes": queue_bytes, "buffer_kb": kb}))

    return scenarios


def build_min_rtt_sweep(bw_mbps: float = 48.0, qs_multiplier: float = 5.0,
                        min_rtts_ms: Tuple[float, ...] = (20.0, 40.0, 60.0, 80.0, 120.0),
                        duration: float = 30.0) -> List[Scenario]:
    """Single flow at fixed capacity, buffer qs_multiplier x BDP of each min RTT."""

    scenarios = []

    for rtt in min_rtts_ms:
        queue_bytes = _queue_bytes(qs_multiplier, bw_mbps, rtt)
        link = LinkConfig(trace=BandwidthTrace.flat(bw_mbps * 1e6, horizon=duration),
                          min_rtt=rtt / 1e3,
                          queue_capacity=queue_bytes)
        scenarios.append(Scenario(id="sweep_bw%g_qs%g_rtt%g" % (bw_mbps, qs_multiplier, rtt),
                                  benchmark=Benchmark.SWEEP,
                                  link=link,
                                  duration=duration,
                                  flows=(FlowSpec(SCHEME_UNDER_TEST, 0.0),),
                                  params={"bw_mbps": bw_mbps, "min_rtt_ms": rtt, "qs_multiplier": qs_multiplier,
                                          "queue_bytes": queue_bytes}))

    return scenarios


def build_benchmark(name: str, scheme: str = SCHEME_UNDER_TEST, grid: Optional[dict] = None,
                    durations: Optional[dict] = None) -> List[Scenario]:
    """Scenario list of a benchmark by name: ccbench1 (flat + step), ccbench1_flat, ccbench1_step or ccbench2."""

    durs = dict(DEFAULT_DURATIONS)
    durs.update(durations or {})

    if name == "ccbench1":
        return build_ccbench1(grid, durs["ccbench1_duration_s"])
    elif name == Benchmark.CCBENCH1_FLAT.value:
        return build_ccbench1_flat(grid, durs["ccbench1_duration_s"])
    elif name == Benchmark.CCBENCH1_STEP.value:
        return build_ccbench1_step(grid, durs["ccbench1_duration_s"])
    elif name == Benchmark.CCBENCH2.value:
        return build_ccbench2(scheme, grid, durs["ccbench2_duration_s"], durs["ccbench2_stagger_s"])
    else:
        raise ValueError("Unknown benchmark %s!" % name)


# ----------------------------------------------------------------------------------------------------------------------
# MANIFEST -------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def scenario_to_dict(scenario: Scenario) -> dict:
    trace = scenario.link.trace

    return {"id": scenario.id,
            "benchmark": scenario.benchmark.value,
            "duration_s": scenario.duration,
            "link": {"segments": [[t, rate] for t, rate in trace.segments],
                     "horizon_s": trace.horizon if math.isfinite(trace.horizon) else None,
                     "min_rtt_s": scenario.link.min_rtt,
                     "queue_capacity_bytes": scenario.link.queue_capacity},
            "flows": [{"scheme": f.scheme, "start_time_s": f.start_time} for f in scenario.flows],
            "params": dict(scenario.params)}


def scenario_from_dict(data: dict) -> Scenario:
    link_data = data["link"]
    horizon = link_data["horizon_s"] if link_data["horizon_s"] is not None else math.inf
    trace = BandwidthTrace(segments=tuple((t, rate) for t, rate in link_data["segments"]), horizon=horizon)

    return Scenario(id=data["id"],
                    benchmark=Benchmark(data["benchmark"]),
                    link=LinkConfig(trace=trace,
                                    min_rtt=link_data["min_rtt_s"],
                                    queue_capacity=int(link_data["queue_capacity_bytes"])),
                    duration=data["duration_s"],
                    flows=tuple(FlowSpec(f["scheme"], f["start_time_s"]) for f in data["flows"]),
                    params=dict(data.get("params", {})))


def save_manifest(scenarios: List[Scenario], path: str, meta: Optional[dict] = None) -> None:
    meta_out = {"step_order": STEP_ORDER}
    meta_out.update(meta or {})

    with open(path, "w") as fh:
        json.dump({"meta": meta_out, "scenarios": [scenario_to_dict(sc) for sc in scenarios]},
                  fh, indent=1, sort_keys=True)


def load_manifest(path: str) -> Tuple[List[Scenario], dict]:
    try:
        with open(path, "r") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise RuntimeError("Could not read scenario manifest %s: %s" % (path, exc))

    return [scenario_from_dict(sc) for sc in data["scenarios"]], data.get("meta", {})
