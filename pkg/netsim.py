"""
Network Simulator Module

Discrete-event simulation of N flows sharing one bottleneck link: a byte-counted drop-tail FIFO queue served at a
piecewise-constant rate, followed by a fixed propagation delay (the minimum RTT) back to the sender.

Model:
    - packets enter the bottleneck instantly when sent, acks return min_rtt after the packet left the link
    - the service time of a packet is fixed when its service starts, at the rate in force at that instant
    - every transmission carries a new sequence number, lost data is not retransmitted (goodput accounting)
    - loss detection is packet-threshold based (dupack_threshold later packets acked) plus an RFC 6298 timeout
    - at most one loss event is signalled per recovery epoch (data sent before the last signalled loss)
    - during threshold-loss recovery each ack releases at most its own bytes plus one MSS

author: ccbench maintainers
date: 2024
"""

import bisect
import heapq
import itertools
import logging
import math
from collections import OrderedDict, deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from cc_schemes import MSS, CcDecision, CcEvent, CongestionControl, EventKind

logger = logging.getLogger(__name__)

BW_CAP = 200e6  # [bit/s] maximum link rate of any trace

DEFAULT_SIM_PARS = {"mss_bytes": MSS,
                    "tick_interval_s": 0.05,
                    "stall_timeout_s": 10.0,
                    "rto_min_s": 0.2,
                    "rto_initial_s": 1.0,
                    "rto_max_s": 60.0,
                    "dupack_threshold": 3}

# event kinds, ordered for readability only (ties are broken by time, flow, seq and insertion order)
EV_FLOW_START = 0
EV_SERVICE_DONE = 1
EV_ACK = 2
EV_PACING = 3
EV_RTO = 4
EV_TICK = 5
EV_FLOW_STOP = 6


def serialization_time(size: int, rate: float) -> float:
    """Time [s] to put size bytes on a link of rate [bit/s]."""

    if not rate > 0.0:
        raise ValueError("Link rate must be positive!")

    return size * 8.0 / rate


# ----------------------------------------------------------------------------------------------------------------------
# LINK DESCRIPTION -----------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

@dataclass(frozen=True)
class BandwidthTrace:
    """
    Piecewise-constant link rate. segments holds (start_time [s], rate [bit/s]) pairs; the first segment starts at
    0, starts ascend strictly, the last segment holds until horizon.
    """
    segments: Tuple[Tuple[float, float], ...]
    horizon: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple((float(t), float(r)) for t, r in self.segments))
        self.validate()
        object.__setattr__(self, "_starts", [t for t, _ in self.segments])

    def validate(self) -> None:
        if not self.segments:
            raise ValueError("Bandwidth trace needs at least one segment!")

        if self.segments[0][0] != 0.0:
            raise ValueError("First bandwidth segment must start at 0 s!")

        for (t_prev, _), (t_next, _) in zip(self.segments[:-1], self.segments[1:]):
            if not t_next > t_prev:
                raise ValueError("Bandwidth segment starts must be strictly ascending!")

        for _, rate in self.segments:
            if not 0.0 < rate <= BW_CAP:
                raise ValueError("Bandwidth segment rate %.0f bit/s outside (0, %.0f]!" % (rate, BW_CAP))

        if not self.horizon > self.segments[-1][0]:
            raise ValueError("Bandwidth trace horizon must lie after the last segment start!")

    @classmethod
    def flat(cls, rate: float, horizon: float = math.inf) -> "BandwidthTrace":
        return cls(segments=((0.0, rate),), horizon=horizon)

    @classmethod
    def step(cls, rate: float, multiplier: float, period: float, horizon: float) -> "BandwidthTrace":
        """Alternates rate and multiplier * rate every period seconds, starting with rate."""

        if not period > 0.0 or not math.isfinite(horizon):
            raise ValueError("Step traces need a positive period and a finite horizon!")

        no_segments = int(math.ceil(horizon / period))
        segments = tuple((i * period, rate if i % 2 == 0 else multiplier * rate) for i in range(no_segments))

        return cls(segments=segments, horizon=horizon)

    def rate_at(self, t: float) -> float:
        idx = bisect.bisect_right(self._starts, t) - 1
        return self.segments[max(idx, 0)][1]

    def capacity_bits(self, t0: float, t1: float) -> float:
        """Bits the link can serve in [t0, t1]."""

        if t1 <= t0:
            return 0.0

        bits = 0.0
        bounds = self._starts[1:] + [math.inf]

        for (start, rate), end in zip(self.segments, bounds):
            lo = max(start, t0)
            hi = min(end, t1)

            if hi > lo:
                bits += (hi - lo) * rate

        return bits

    def mean_rate(self, t0: float, t1: float) -> float:
        if not t1 > t0:
            raise ValueError("Mean rate needs a nonempty time window!")

        return self.capacity_bits(t0, t1) / (t1 - t0)

    def change_times(self, t0: float, t1: float) -> List[float]:
        """Rate change instants inside (t0, t1)."""
        return [t for t in self._starts[1:] if t0 < t < t1]


@dataclass(frozen=True)
class LinkConfig:
    trace: BandwidthTrace
    min_rtt: float  # [s] propagation delay of a round trip without queueing
    queue_capacity: int  # [B] excluding the packet in service

    def __post_init__(self):
        if not self.min_rtt > 0.0:
            raise ValueError("Minimum RTT must be positive!")

        if self.queue_capacity < MSS:
            raise ValueError("Queue capacity must hold at least one packet (%i B)!" % MSS)


# ----------------------------------------------------------------------------------------------------------------------
# PACKETS AND TRACES ---------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

class Packet(object):
    """
    A data packet. delivered and delivered_time snapshot the flow's delivery counter at send time and are used for
    delivery-rate samples.
    """

    __slots__ = ("flow_id", "seq", "size", "sent_at", "delivered", "delivered_time")

    def __init__(self, flow_id: int, seq: int, size: int, sent_at: float, delivered: int, delivered_time: float):
        self.flow_id = flow_id
        self.seq = seq
        self.size = size
        self.sent_at = sent_at
        self.delivered = delivered
        self.delivered_time = delivered_time


@dataclass
class FlowTrace:
    """Per-flow output of a simulation. The ack columns are in ack-arrival order."""
    flow_id: int
    scheme: str
    start_time: float
    stop_time: float
    ack_times: List[float] = field(default_factory=list)
    ack_bytes: List[int] = field(default_factory=list)
    rtt_samples: List[float] = field(default_factory=list)
    ack_seqs: List[int] = field(default_factory=list)
    bytes_sent: int = 0
    drop_count: int = 0
    bytes_dropped: int = 0
    bytes_in_flight_end: int = 0  # bytes physically queued, in service or propagating when the run ended
    loss_events: int = 0
    timeout_events: int = 0
    stalled: bool = False
    stall_time: Optional[float] = None

    @property
    def ack_records(self) -> List[Tuple[float, int, float]]:
        """(ack_time, bytes_acked, rtt_sample) per ack"""
        return list(zip(self.ack_times, self.ack_bytes, self.rtt_samples))

    @property
    def bytes_acked(self) -> int:
        return int(sum(self.ack_bytes))

    @property
    def ack_count(self) -> int:
        return len(self.ack_times)

    def goodput(self) -> float:
        """Mean goodput [bit/s] over the flow's active period."""

        duration = self.stop_time - self.start_time
        return self.bytes_acked * 8.0 / duration if duration > 0.0 else 0.0

    def mean_rtt(self) -> Optional[float]:
        return float(np.mean(self.rtt_samples)) if self.rtt_samples else None


class _FlowState(object):
    """Sender state of one flow inside the simulator"""

    __slots__ = ("trace", "scheme", "active", "cwnd", "pacing_rate", "next_send_time", "pacing_pending", "next_seq",
                 "outstanding", "inflight", "in_network", "delivered", "delivered_time", "recovery_seq", "in_recovery",
                 "srtt", "rttvar", "rto", "rto_deadline", "rto_pending", "last_ack_time")

    def __init__(self, trace: FlowTrace, scheme: CongestionControl, rto_initial: float):
        self.trace = trace
        self.scheme = scheme
        self.active = False
        self.cwnd = scheme.cwnd
        self.pacing_rate = scheme.pacing_rate
        self.next_send_time = 0.0
        self.pacing_pending = False
        self.next_seq = 0
        self.outstanding = OrderedDict()  # seq -> Packet, in send order
        self.inflight = 0  # [B] sender view: sent, neither acked nor declared lost
        self.in_network = 0  # [B] physical view: queued, in service or propagating
        self.delivered = 0
        self.delivered_time = trace.start_time
        self.recovery_seq = -1
        self.in_recovery = False
        self.srtt = None
        self.rttvar = None
        self.rto = rto_initial
        self.rto_deadline = math.inf
        self.rto_pending = False
        self.last_ack_time = trace.start_time


# ----------------------------------------------------------------------------------------------------------------------
# SIMULATOR ------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

class BottleneckSimulator(object):
    """
    Event-driven bottleneck simulation.

    Example:
        sim = BottleneckSimulator(link, [(make_scheme("cubic"), 0.0, 30.0)])
        traces = sim.run()
    """

    def __init__(self, link: LinkConfig, flows: Sequence[Tuple[CongestionControl, float, float]],
                 sim_pars: Optional[dict] = None, until: Optional[float] = None):
        """
        Args:
            link: bottleneck description
            flows: (scheme instance, start_time, stop_time) per flow, flow ids are list indices
            sim_pars: overrides of DEFAULT_SIM_PARS
            until: end of the run [s], defaults to the latest stop_time (acks in flight then are not collected)
        """

        link.trace.validate()

        if not flows:
            raise ValueError("At least one flow is required!")

        self.link = link
        self.pars = dict(DEFAULT_SIM_PARS)
        self.pars.update(sim_pars or {})

        max_stop = 0.0
        for scheme, start_time, stop_time in flows:
            if start_time < 0.0 or stop_time < start_time:
                raise ValueError("Flow times must satisfy 0 <= start_time <= stop_time!")
            if stop_time > link.trace.horizon:
                raise ValueError("Flow stop_time %.3fs lies beyond the trace horizon!" % stop_time)
            max_stop = max(max_stop, stop_time)

        self.horizon = max_stop if until is None else max(until, max_stop)

        self.flows = [_FlowState(FlowTrace(flow_id=i,
                                           scheme=scheme.name or type(scheme).__name__,
                                           start_time=float(start_time),
                                           stop_time=float(stop_time)),
                                 scheme,
                                 self.pars["rto_initial_s"])
                      for i, (scheme, start_time, stop_time) in enumerate(flows)]

        self._events = []
        self._counter = itertools.count()

        # link state
        self.queue = deque()
        self.queue_bytes = 0
        self.max_queue_bytes = 0
        self.busy = False
        self.now = 0.0

    # ------------------------------------------------------------------------------------------------------------------
    # EVENT QUEUE ------------------------------------------------------------------------------------------------------
    # ------------------------------------------------------------------------------------------------------------------

    def _push(self, time: float, flow_id: int, seq: int, kind: int, payload=None) -> None:
        heapq.heappush(self._events, (time, flow_id, seq, next(self._counter), kind, payload))

    def run(self) -> List[FlowTrace]:
        for flow_id, flow in enumerate(self.flows):
            if flow.trace.stop_time > flow.trace.start_time:
                self._push(flow.trace.start_time, flow_id, -1, EV_FLOW_START)
                self._push(flow.trace.stop_time, flow_id, -1, EV_FLOW_STOP)

        handlers = {EV_FLOW_START: self._on_flow_start,
                    EV_SERVICE_DONE: self._on_service_done,
                    EV_ACK: self._on_ack,
                    EV_PACING: self._on_pacing,
                    EV_RTO: self._on_rto,
                    EV_TICK: self._on_tick,
                    EV_FLOW_STOP: self._on_flow_stop}

        while self._events:
            if self._events[0][0] > self.horizon:
                break

            time, flow_id, _, _, kind, payload = heapq.heappop(self._events)
            self.now = time
            handlers[kind](self.flows[flow_id], payload)

        for flow in self.flows:
            flow.trace.bytes_in_flight_end = flow.in_network

        return [flow.trace for flow in self.flows]

    # ------------------------------------------------------------------------------------------------------------------
    # LINK -------------------------------------------------------------------------------------------------------------
    # ------------------------------------------------------------------------------------------------------------------

    def _enqueue(self, flow: _FlowState, pkt: Packet) -> None:
        if not self.busy:
            flow.in_network += pkt.size
            self._start_service(pkt)
        elif self.queue_bytes + pkt.size <= self.link.queue_capacity:
            flow.in_network += pkt.size
            self.queue.append(pkt)
            self.queue_bytes += pkt.size
            self.max_queue_bytes = max(self.max_queue_bytes, self.queue_bytes)
        else:
            flow.trace.drop_count += 1
            flow.trace.bytes_dropped += pkt.size

    def _start_service(self, pkt: Packet) -> None:
        self.busy = True
        done = self.now + serialization_time(pkt.size, self.link.trace.rate_at(self.now))
        self._push(done, pkt.flow_id, pkt.seq, EV_SERVICE_DONE, pkt)

    def _on_service_done(self, flow: _FlowState, pkt: Packet) -> None:
        self._push(self.now + self.link.min_rtt, pkt.flow_id, pkt.seq, EV_ACK, pkt)
        self.busy = False

        if self.queue:
            nxt = self.queue.popleft()
            self.queue_bytes -= nxt.size
            self._start_service(nxt)

    # ------------------------------------------------------------------------------------------------------------------
    # SENDER -----------------------------------------------------------------------------------------------------------
    # ------------------------------------------------------------------------------------------------------------------

    def _deliver(self, flow: _FlowState, event: CcEvent) -> None:
        decision: CcDecision = flow.scheme.on_event(event)
        flow.cwnd = decision.cwnd
        flow.pacing_rate = decision.pacing_rate

    def _try_send(self, flow: _FlowState, budget: Optional[float] = None) -> None:
        """
        Sends while the window and the pacing gate allow. During loss recovery only acks release packets, each at most
        budget bytes (the acked bytes plus one MSS, the slow start reduction bound of RFC 6937).
        """
        mss = self.pars["mss_bytes"]

        if flow.in_recovery and not flow.outstanding:
            flow.in_recovery = False

        if not flow.in_recovery:
            budget = math.inf
        elif budget is None:
            return

        while flow.active and budget >= mss and flow.inflight + mss <= max(flow.cwnd, mss):
            if flow.pacing_rate is not None:
                if self.now < flow.next_send_time:
                    if not flow.pacing_pending:
                        flow.pacing_pending = True
                        self._push(flow.next_send_time, flow.trace.flow_id, -1, EV_PACING)
                    return

                flow.next_send_time = self.now + serialization_time(mss, flow.pacing_rate)

            self._send_packet(flow, mss)
            budget -= mss

    def _send_packet(self, flow: _FlowState, size: int) -> None:
        pkt = Packet(flow_id=flow.trace.flow_id,
                     seq=flow.next_seq,
                     size=size,
                     sent_at=self.now,
                     delivered=flow.delivered,
                     delivered_time=flow.delivered_time)
        flow.next_seq += 1

        if not flow.outstanding:
            self._arm_rto(flow)

        flow.outstanding[pkt.seq] = pkt
        flow.inflight += size
        flow.trace.bytes_sent += size

        self._enqueue(flow, pkt)

    def _arm_rto(self, flow: _FlowState) -> None:
        flow.rto_deadline = self.now + flow.rto

        if not flow.rto_pending:
            flow.rto_pending = True
            self._push(flow.rto_deadline, flow.trace.flow_id, -1, EV_RTO)

    def _update_rto(self, flow: _FlowState, rtt: float) -> None:
        # RFC 6298
        if flow.srtt is None:
            flow.srtt = rtt
            flow.rttvar = rtt / 2.0
        else:
            flow.rttvar = 0.75 * flow.rttvar + 0.25 * abs(flow.srtt - rtt)
            flow.srtt = 0.875 * flow.srtt + 0.125 * rtt

        flow.rto = min(max(flow.srtt + 4.0 * flow.rttvar, self.pars["rto_min_s"]), self.pars["rto_max_s"])

    def _signal_loss(self, flow: _FlowState, kind: EventKind, newest_lost_seq: int) -> None:
        # timeouts always reach the scheme, threshold losses once per recovery epoch
        if kind is EventKind.DUPACK_LOSS and newest_lost_seq <= flow.recovery_seq:
            return

        flow.recovery_seq = flow.next_seq - 1
        flow.in_recovery = kind is EventKind.DUPACK_LOSS

        if kind is EventKind.TIMEOUT_LOSS:
            flow.trace.timeout_events += 1
        else:
            flow.trace.loss_events += 1

        self._deliver(flow, CcEvent(kind=kind, now=self.now, bytes_in_flight=flow.inflight))

    # ------------------------------------------------------------------------------------------------------------------
    # EVENT HANDLERS ---------------------------------------------------------------------------------------------------
    # ------------------------------------------------------------------------------------------------------------------

    def _on_flow_start(self, flow: _FlowState, payload) -> None:
        flow.active = True
        flow.last_ack_time = self.now
        flow.delivered_time = self.now
        flow.next_send_time = self.now

        self._push(self.now + self.pars["tick_interval_s"], flow.trace.flow_id, -1, EV_TICK)
        self._deliver(flow, CcEvent(kind=EventKind.SEND_OPPORTUNITY, now=self.now, bytes_in_flight=flow.inflight))
        self._try_send(flow)

    def _on_flow_stop(self, flow: _FlowState, payload) -> None:
        flow.active = False

    def _on_ack(self, flow: _FlowState, pkt: Packet) -> None:
        flow.in_network -= pkt.size
        rtt = self.now - pkt.sent_at

        flow.trace.ack_times.append(self.now)
        flow.trace.ack_bytes.append(pkt.size)
        flow.trace.rtt_samples.append(rtt)
        flow.trace.ack_seqs.append(pkt.seq)

        flow.delivered += pkt.size
        interval = self.now - pkt.delivered_time
        delivery_rate = (flow.delivered - pkt.delivered) * 8.0 / interval if interval > 0.0 else 0.0
        flow.delivered_time = self.now

        if not flow.active:
            return

        flow.last_ack_time = self.now
        self._update_rto(flow, rtt)

        if flow.outstanding.pop(pkt.seq, None) is not None:
            flow.inflight -= pkt.size

        # recovery ends with the first ack of data sent after the loss was signalled
        if flow.in_recovery and pkt.seq > flow.recovery_seq:
            flow.in_recovery = False

        # packet-threshold loss detection, packets are delivered in send order
        newest_lost = -1
        threshold_seq = pkt.seq - self.pars["dupack_threshold"]
        while flow.outstanding:
            first_seq = next(iter(flow.outstanding))
            if first_seq > threshold_seq:
                break
            lost = flow.outstanding.pop(first_seq)
            flow.inflight -= lost.size
            newest_lost = first_seq

        if flow.outstanding:
            flow.rto_deadline = self.now + flow.rto
        else:
            flow.rto_deadline = math.inf

        self._deliver(flow, CcEvent(kind=EventKind.ACK,
                                    now=self.now,
                                    rtt_sample=rtt,
                                    bytes_acked=pkt.size,
                                    bytes_in_flight=flow.inflight,
                                    delivery_rate=delivery_rate))

        if newest_lost >= 0:
            self._signal_loss(flow, EventKind.DUPACK_LOSS, newest_lost)

        self._try_send(flow, budget=pkt.size + self.pars["mss_bytes"])

    def _on_pacing(self, flow: _FlowState, payload) -> None:
        flow.pacing_pending = False

        if not flow.active:
            return

        self._deliver(flow, CcEvent(kind=EventKind.SEND_OPPORTUNITY, now=self.now, bytes_in_flight=flow.inflight))
        self._try_send(flow)

    def _on_rto(self, flow: _FlowState, payload) -> None:
        flow.rto_pending = False

        if not flow.active or not flow.outstanding:
            return

        if self.now < flow.rto_deadline:
            flow.rto_pending = True
            self._push(flow.rto_deadline, flow.trace.flow_id, -1, EV_RTO)
            return

        # timeout: everything outstanding is declared lost, late acks still count as delivered
        newest_lost = next(reversed(flow.outstanding))
        flow.outstanding.clear()
        flow.inflight = 0
        flow.rto = min(2.0 * flow.rto, self.pars["rto_max_s"])
        flow.rto_deadline = math.inf

        logger.debug("Flow %i: retransmission timeout at %.3fs" % (flow.trace.flow_id, self.now))

        self._signal_loss(flow, EventKind.TIMEOUT_LOSS, newest_lost)
        self._try_send(flow)

    def _on_tick(self, flow: _FlowState, payload) -> None:
        if not flow.active:
            return

        if self.now - flow.last_ack_time >= self.pars["stall_timeout_s"]:
            flow.active = False
            flow.trace.stalled = True
            flow.trace.stall_time = self.now
            logger.warning("Flow %i (%s) stalled at %.3fs: no ack for %.1fs, flow terminated"
                           % (flow.trace.flow_id, flow.trace.scheme, self.now, self.pars["stall_timeout_s"]))
            return

        self._push(self.now + self.pars["tick_interval_s"], flow.trace.flow_id, -1, EV_TICK)
        self._deliver(flow, CcEvent(kind=EventKind.TIMER_TICK, now=self.now, bytes_in_flight=flow.inflight))
        self._try_send(flow)


def simulate(link: LinkConfig, flows: Sequence[Tuple[CongestionControl, float, float]],
             sim_pars: Optional[dict] = None, until: Optional[float] = None) -> List[FlowTrace]:
    """Runs one simulation and returns one FlowTrace per flow, in input order."""
    return BottleneckSimulator(link, flows, sim_pars=sim_pars, until=until).run()
