"""
Scoring Module

Turns flow traces into per-interval measurements and scores, decides the winners of every (scenario, interval)
cell and aggregates winning rates into a ranking.

Scores:
    power          r^alpha / d   with r in Mbps and d in ms, higher is better
    friendliness   |f - r|       with f the fair share and r the rate in Mbps, lower is better

A scheme wins a cell if it scores within 10 % of the best scheme of that cell.

author: ccbench maintainers
date: 2024
"""

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np
import pandas as pd

from netsim import FlowTrace
from scenarios import Benchmark, Scenario

NO_INTERVALS = 4
WINNER_MARGIN = 0.1
FAIR_SHARE_EPSILON = 0.01


class ScoreKind(Enum):
    POWER = "power"
    FRIENDLINESS = "friendliness"


class Direction(Enum):
    HIGHER_BETTER = "higher_better"
    LOWER_BETTER = "lower_better"


@dataclass(frozen=True)
class IntervalMeasurement:
    """Rate and delay of one flow in one scoring interval"""
    flow_id: int
    interval_index: int
    start: float  # [s]
    end: float  # [s]
    r: float  # [bit/s]
    d: Optional[float]  # [s] None without acks
    f: Optional[float]  # [bit/s] fair share, only for multi-flow scenarios
    ack_count: int

    @property
    def no_data(self) -> bool:
        return self.ack_count == 0


@dataclass(frozen=True)
class ScoreRecord:
    scenario_id: str
    scheme: str
    interval_index: int
    kind: ScoreKind
    value: Optional[float]  # None marks a no-data interval
    fair_share: Optional[float] = None  # [Mbps]
    r_mbps: Optional[float] = None
    d_ms: Optional[float] = None

    @property
    def direction(self) -> Direction:
        return Direction.HIGHER_BETTER if self.kind is ScoreKind.POWER else Direction.LOWER_BETTER

    @property
    def cell(self) -> Tuple[str, int, ScoreKind]:
        return self.scenario_id, self.interval_index, self.kind


@dataclass(frozen=True)
class Ranking:
    """(scheme, winning rate [%]) pairs, best first"""
    entries: Tuple[Tuple[str, float], ...]

    @property
    def schemes(self) -> List[str]:
        return [scheme for scheme, _ in self.entries]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"rank": np.arange(1, len(self.entries) + 1),
                             "scheme": self.schemes,
                             "winning_rate": [rate for _, rate in self.entries]})


# ----------------------------------------------------------------------------------------------------------------------
# SCORES ---------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def power_score(r: float, d: float, alpha: float = 2.0) -> float:
    """Power score of rate r [Mbps] and delay d [ms]."""

    if not d > 0.0:
        raise ValueError("Power score is undefined for a delay <= 0!")
    if r < 0.0:
        raise ValueError("Rate must not be negative!")

    return r ** alpha / d


def friendliness_score(f: float, r: float) -> float:
    """Deviation of rate r [Mbps] from the fair share f [Mbps]."""

    if not f > 0.0:
        raise ValueError("Fair share must be positive!")
    if r < 0.0:
        raise ValueError("Rate must not be negative!")

    return abs(f - r)


# ----------------------------------------------------------------------------------------------------------------------
# MEASUREMENTS ---------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def interval_measurements(trace: FlowTrace, scenario: Scenario, no_intervals: int = NO_INTERVALS) \
        -> List[IntervalMeasurement]:
    """
    Splits the scenario's measurement window into no_intervals equal intervals and measures the flow's delivery rate
    and mean RTT in each. All intervals are half-open except the last, which includes the end of the window. For
    multi-flow scenarios the fair share is the mean link capacity of the interval divided by the number of flows
    active at its start.
    """

    window_start, window_end = scenario.measurement_window
    edges = np.linspace(window_start, window_end, no_intervals + 1)

    times = np.asarray(trace.ack_times, dtype=float)
    sizes = np.asarray(trace.ack_bytes, dtype=float)
    rtts = np.asarray(trace.rtt_samples, dtype=float)

    multi_flow = scenario.benchmark is Benchmark.CCBENCH2
    measurements = []

    for i in range(no_intervals):
        lo, hi = float(edges[i]), float(edges[i + 1])

        if i < no_intervals - 1:
            mask = (times >= lo) & (times < hi)
        else:
            mask = (times >= lo) & (times <= hi)

        ack_count = int(np.count_nonzero(mask))

        if multi_flow:
            no_active = sum(1 for fl in scenario.flows if fl.start_time <= lo < scenario.duration)
            f = scenario.link.trace.mean_rate(lo, hi) / max(no_active, 1)
        else:
            f = None

        measurements.append(IntervalMeasurement(flow_id=trace.flow_id,
                                                interval_index=i,
                                                start=lo,
                                                end=hi,
                                                r=float(sizes[mask].sum()) * 8.0 / (hi - lo),
                                                d=float(rtts[mask].mean()) if ack_count > 0 else None,
                                                f=f,
                                                ack_count=ack_count))

    return measurements


def score_records(measurements: Iterable[IntervalMeasurement], scenario_id: str, scheme: str, kind: ScoreKind,
                  alpha: float = 2.0) -> List[ScoreRecord]:
    records = []

    for meas in measurements:
        r_mbps = meas.r / 1e6
        d_ms = meas.d * 1e3 if meas.d is not None else None
        f_mbps = meas.f / 1e6 if meas.f is not None else None

        if meas.no_data:
            value = None
        elif kind is ScoreKind.POWER:
            value = power_score(r_mbps, d_ms, alpha)
        else:
            if f_mbps is None:
                raise ValueError("Friendliness needs a fair share, scenario %s is single-flow!" % scenario_id)
            value = friendliness_score(f_mbps, r_mbps)

        records.append(ScoreRecord(scenario_id=scenario_id,
                                   scheme=scheme,
                                   interval_index=meas.interval_index,
                                   kind=kind,
                                   value=value,
                                   fair_share=f_mbps,
                                   r_mbps=r_mbps,
                                   d_ms=d_ms))

    return records


def mean_score(records: Iterable[ScoreRecord]) -> Optional[float]:
    values = [rec.value for rec in records if rec.value is not None]
    return float(np.mean(values)) if values else None


# ----------------------------------------------------------------------------------------------------------------------
# WINNERS AND RANKING --------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def winners(records: List[ScoreRecord], margin: float = WINNER_MARGIN, epsilon: float = FAIR_SHARE_EPSILON) \
        -> Set[str]:
    """
    Winner set of one (scenario, interval, kind) cell. Higher-better: value >= (1 - margin) * best. Lower-better:
    value <= (1 + margin) * best, or value <= epsilon * fair share if the best value is 0. No-data records never win.
    """

    if not records:
        return set()

    if len({rec.cell for rec in records}) > 1:
        raise ValueError("Winner records must share scenario, interval and score kind!")

    valid = [rec for rec in records if rec.value is not None]

    if not valid:
        return set()

    if valid[0].direction is Direction.HIGHER_BETTER:
        threshold = (1.0 - margin) * max(rec.value for rec in valid)
        return {rec.scheme for rec in valid if rec.value >= threshold}

    best = min(rec.value for rec in valid)

    if best == 0.0:
        return {rec.scheme for rec in valid if rec.value <= epsilon * (rec.fair_share or 0.0)}

    threshold = (1.0 + margin) * best
    return {rec.scheme for rec in valid if rec.value <= threshold}


def winner_sets(records: Iterable[ScoreRecord], margin: float = WINNER_MARGIN, epsilon: float = FAIR_SHARE_EPSILON) \
        -> Dict[Tuple[str, int, ScoreKind], Set[str]]:
    cells = defaultdict(list)

    for rec in records:
        cells[rec.cell].append(rec)

    return {cell: winners(recs, margin, epsilon) for cell, recs in sorted(cells.items(), key=lambda x: x[0][:2])}


def winning_rate(winner_sets_: Iterable[Set[str]], scheme: str) -> float:
    """Share [%] of cells won by scheme. Accepts the winner sets themselves or a dict of them."""

    if isinstance(winner_sets_, dict):
        winner_sets_ = winner_sets_.values()

    sets = list(winner_sets_)

    if not sets:
        raise ValueError("Winning rate is undefined without any evaluated cell!")

    return 100.0 * sum(1 for ws in sets if scheme in ws) / len(sets)


def rank(rates: Dict[str, float]) -> Ranking:
    """Sorts by winning rate, best first; ties are broken by scheme id."""
    return Ranking(entries=tuple(sorted(rates.items(), key=lambda x: (-x[1], x[0]))))
