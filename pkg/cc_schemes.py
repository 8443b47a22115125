"""
Congestion Control Schemes Module

Event-driven congestion-control state machines sharing one interface: every scheme consumes CcEvents in nondecreasing
time order and answers with a CcDecision (congestion window in bytes, optional pacing rate in bits/s).

Schemes are pure functions of their prior state and the event; no scheme reads a clock or draws random numbers, so
replaying a recorded event log on a fresh instance reproduces the recorded decisions exactly.

Roster:
    newreno, cubic, vegas, ledbat, bbr_lite (required), copa_lite, westwood_like (optional)
"""

import math
from abc import ABC
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Type

import numpy as np

MSS = 1500  # [B] size of every data packet
INIT_CWND_PACKETS = 10
MIN_CWND_PACKETS = 2

EPS = 1e-9  # tolerance of threshold comparisons on packet counts


class EventKind(Enum):
    """Kinds of events a scheme can receive"""
    ACK = "ack"
    DUPACK_LOSS = "dupack_loss"
    TIMEOUT_LOSS = "timeout_loss"
    SEND_OPPORTUNITY = "send_opportunity"
    TIMER_TICK = "timer_tick"


@dataclass(frozen=True)
class CcEvent:
    """Input of a scheme. rtt_sample, bytes_acked and delivery_rate are only meaningful on ack events."""
    kind: EventKind
    now: float  # [s]
    rtt_sample: float = 0.0  # [s]
    bytes_acked: int = 0  # [B]
    bytes_in_flight: int = 0  # [B] after the acked packet left the window
    delivery_rate: float = 0.0  # [bit/s] 0 if unknown

    def __post_init__(self):
        if self.kind is EventKind.ACK and not self.rtt_sample > 0.0:
            raise ValueError("Ack events require a positive rtt sample!")


@dataclass(frozen=True)
class CcDecision:
    """Output of a scheme. pacing_rate None means unlimited (window-limited sending only)."""
    cwnd: float  # [B]
    pacing_rate: Optional[float] = None  # [bit/s]


class CongestionControl(ABC):
    """
    Base class of all schemes. Subclasses override the _on_* handlers they need; the default handlers do nothing.
    After every event the window is clamped to MIN_CWND_PACKETS * mss.
    """

    name = ""

    def __init__(self, mss: int = MSS):
        self.mss = mss
        self.cwnd = float(INIT_CWND_PACKETS * mss)
        self.pacing_rate = None

        self._handlers = {EventKind.ACK: self._on_ack,
                          EventKind.DUPACK_LOSS: self._on_dupack_loss,
                          EventKind.TIMEOUT_LOSS: self._on_timeout_loss,
                          EventKind.SEND_OPPORTUNITY: self._on_send_opportunity,
                          EventKind.TIMER_TICK: self._on_timer_tick}

    @property
    def min_cwnd(self) -> float:
        return float(MIN_CWND_PACKETS * self.mss)

    def on_event(self, event: CcEvent) -> CcDecision:
        self._handlers[event.kind](event)
        self.cwnd = max(self.cwnd, self.min_cwnd)
        return self.decision()

    def decision(self) -> CcDecision:
        return CcDecision(cwnd=self.cwnd, pacing_rate=self.pacing_rate)

    def _on_ack(self, event: CcEvent) -> None:
        pass

    def _on_dupack_loss(self, event: CcEvent) -> None:
        pass

    def _on_timeout_loss(self, event: CcEvent) -> None:
        pass

    def _on_send_opportunity(self, event: CcEvent) -> None:
        pass

    def _on_timer_tick(self, event: CcEvent) -> None:
        pass


# ----------------------------------------------------------------------------------------------------------------------
# LOSS-BASED SCHEMES ---------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

class NewReno(CongestionControl):
    """
    AIMD window control (RFC 5681/6582). Slow start grows cwnd by the acked bytes, congestion avoidance by
    mss * bytes_acked / cwnd per ack, a fast-retransmit loss halves the window, a timeout restarts slow start.

    Simplifications: no partial-ack window inflation; recovery epochs are enforced by the simulator, which signals at
    most one loss per window of data.
    """

    name = "newreno"

    def __init__(self, mss: int = MSS):
        super().__init__(mss)
        self.ssthresh = math.inf

    def _on_ack(self, event: CcEvent) -> None:
        if self.cwnd < self.ssthresh:
            self.cwnd += event.bytes_acked
        else:
            self.cwnd += self.mss * event.bytes_acked / self.cwnd

    def _on_dupack_loss(self, event: CcEvent) -> None:
        self.ssthresh = max(self.cwnd / 2.0, self.min_cwnd)
        self.cwnd = self.ssthresh

    def _on_timeout_loss(self, event: CcEvent) -> None:
        self.ssthresh = max(self.cwnd / 2.0, self.min_cwnd)
        self.cwnd = self.min_cwnd


class Cubic(CongestionControl):
    """
    CUBIC window growth (RFC 9438) with C = 0.4 and beta = 0.7:

        W_cubic(t) = C * (t - K)^3 + W_max,   K = cbrt(W_max * (1 - beta) / C)   (windows in packets, t in s)

    including fast convergence and the Reno-friendly region. The target is evaluated one min RTT ahead and limited to
    1.5 * cwnd.

    Simplifications: no HyStart (plain slow start), no kernel integer arithmetic, no ack-count pacing of increments.
    """

    name = "cubic"

    C = 0.4
    BETA = 0.7

    def __init__(self, mss: int = MSS):
        super().__init__(mss)
        self.ssthresh = math.inf
        self.w_max = 0.0  # [B]
        self.k = 0.0  # [s]
        self.epoch_start = None
        self.w_est = 0.0  # [B]
        self.min_rtt = math.inf

    def w_cubic(self, t: float) -> float:
        """Cubic window [B] t seconds after the start of the current epoch."""
        return self.C * (t - self.k) ** 3 * self.mss + self.w_max

    def _calc_k(self) -> float:
        return float(np.cbrt(max(self.w_max - self.cwnd, 0.0) / self.mss / self.C))

    def _on_ack(self, event: CcEvent) -> None:
        self.min_rtt = min(self.min_rtt, event.rtt_sample)

        if self.cwnd < self.ssthresh:
            self.cwnd += event.bytes_acked
            return

        if self.epoch_start is None:
            self.epoch_start = event.now

            if self.cwnd < self.w_max:
                self.k = self._calc_k()
            else:
                self.k = 0.0
                self.w_max = self.cwnd

            self.w_est = self.cwnd

        t = event.now - self.epoch_start
        target = min(self.w_cubic(t + self.min_rtt), 1.5 * self.cwnd)

        # Reno-friendly estimate
        alpha_cubic = 3.0 * (1.0 - self.BETA) / (1.0 + self.BETA)
        self.w_est += alpha_cubic * self.mss * event.bytes_acked / self.cwnd

        if target < self.w_est:
            self.cwnd = max(self.cwnd, self.w_est)
        elif target > self.cwnd:
            self.cwnd += (target - self.cwnd) / self.cwnd * event.bytes_acked

    def _reduce(self) -> None:
        self.epoch_start = None

        # fast convergence
        if self.cwnd < self.w_max:
            self.w_max = self.cwnd * (1.0 + self.BETA) / 2.0
        else:
            self.w_max = self.cwnd

        self.ssthresh = max(self.cwnd * self.BETA, self.min_cwnd)

    def _on_dupack_loss(self, event: CcEvent) -> None:
        self._reduce()
        self.cwnd = self.ssthresh
        self.k = self._calc_k()

    def _on_timeout_loss(self, event: CcEvent) -> None:
        self._reduce()
        self.cwnd = self.min_cwnd
        self.k = self._calc_k()


class WestwoodLike(CongestionControl):
    """
    Westwood+ style: Reno growth, but a loss sets the window to the filtered bandwidth estimate times the minimum RTT
    instead of halving it. The estimate is an EWMA (gain 1/8) of the delivery-rate samples.

    Simplifications: the rate samples come from the simulator's delivery-rate estimator instead of per-RTT ack
    counting; the post-loss window is capped at 7/8 of the current window so a loss always backs off.
    """

    name = "westwood_like"

    BW_FILTER_GAIN = 0.125
    MAX_LOSS_FRACTION = 0.875

    def __init__(self, mss: int = MSS):
        super().__init__(mss)
        self.ssthresh = math.inf
        self.bw_est = 0.0  # [bit/s]
        self.min_rtt = math.inf

    def _on_ack(self, event: CcEvent) -> None:
        self.min_rtt = min(self.min_rtt, event.rtt_sample)

        if event.delivery_rate > 0.0:
            if self.bw_est == 0.0:
                self.bw_est = event.delivery_rate
            else:
                self.bw_est += self.BW_FILTER_GAIN * (event.delivery_rate - self.bw_est)

        if self.cwnd < self.ssthresh:
            self.cwnd += event.bytes_acked
        else:
            self.cwnd += self.mss * event.bytes_acked / self.cwnd

    def _loss_window(self) -> float:
        bdp_est = self.bw_est / 8.0 * self.min_rtt if math.isfinite(self.min_rtt) else 0.0
        return max(min(bdp_est, self.MAX_LOSS_FRACTION * self.cwnd), self.min_cwnd)

    def _on_dupack_loss(self, event: CcEvent) -> None:
        self.ssthresh = self._loss_window()
        self.cwnd = self.ssthresh

    def _on_timeout_loss(self, event: CcEvent) -> None:
        self.ssthresh = self._loss_window()
        self.cwnd = self.min_cwnd


# ----------------------------------------------------------------------------------------------------------------------
# DELAY-BASED SCHEMES --------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

class Vegas(CongestionControl):
    """
    TCP Vegas. Once per RTT the scheme compares expected and actual throughput,

        diff = (cwnd / base_rtt - cwnd / rtt) * base_rtt   [packets]

    with rtt the smallest sample of the round: diff < alpha grows cwnd by one packet, diff >= beta shrinks it by one
    packet, otherwise it is held. alpha = 2, beta = 4, gamma = 1 packets.

    Simplifications: slow start doubles per RTT (not every other RTT) and ends on the first ack whose sample gives
    diff >= gamma; losses fall back to Reno halving.
    """

    name = "vegas"

    ALPHA = 2.0
    BETA = 4.0
    GAMMA = 1.0

    def __init__(self, mss: int = MSS):
        super().__init__(mss)
        self.ssthresh = math.inf
        self.base_rtt = math.inf
        self.in_slow_start = True
        self.round_end = 0.0
        self.round_min_rtt = math.inf

    def diff(self, rtt: float) -> float:
        return self.cwnd / self.mss * (1.0 - self.base_rtt / rtt)

    def _on_ack(self, event: CcEvent) -> None:
        rtt = event.rtt_sample
        self.base_rtt = min(self.base_rtt, rtt)
        self.round_min_rtt = min(self.round_min_rtt, rtt)

        if self.in_slow_start:
            if self.diff(rtt) >= self.GAMMA - EPS or self.cwnd >= self.ssthresh:
                self.in_slow_start = False
            else:
                self.cwnd += event.bytes_acked

        if event.now >= self.round_end:
            if not self.in_slow_start:
                diff = self.diff(self.round_min_rtt)

                if diff < self.ALPHA - EPS:
                    self.cwnd += self.mss
                elif diff >= self.BETA - EPS:
                    self.cwnd -= self.mss

            self.round_end = event.now + self.round_min_rtt
            self.round_min_rtt = math.inf

    def _on_dupack_loss(self, event: CcEvent) -> None:
        self.ssthresh = max(self.cwnd / 2.0, self.min_cwnd)
        self.cwnd = self.ssthresh
        self.in_slow_start = False

    def _on_timeout_loss(self, event: CcEvent) -> None:
        self.ssthresh = max(self.cwnd / 2.0, self.min_cwnd)
        self.cwnd = self.min_cwnd
        self.in_slow_start = True


class Ledbat(CongestionControl):
    """
    LEDBAT (RFC 6817) with a 100 ms target and gain 1:

        off_target = (TARGET - queuing_delay) / TARGET,   cwnd += GAIN * off_target * bytes_acked * mss / cwnd

    Simplifications: delays are round-trip samples instead of one-way delays, the base delay is the minimum over the
    whole run (no per-minute history), the current-delay filter is the latest sample. Slow start runs until the queuing
    delay exceeds half the target. Losses halve the window.
    """

    name = "ledbat"

    TARGET = 0.1  # [s]
    GAIN = 1.0

    def __init__(self, mss: int = MSS):
        super().__init__(mss)
        self.ssthresh = math.inf
        self.base_delay = math.inf
        self.queuing_delay = 0.0
        self.in_slow_start = True

    def _on_ack(self, event: CcEvent) -> None:
        self.base_delay = min(self.base_delay, event.rtt_sample)
        self.queuing_delay = event.rtt_sample - self.base_delay

        if self.in_slow_start:
            if self.queuing_delay > self.TARGET / 2.0 or self.cwnd >= self.ssthresh:
                self.in_slow_start = False
            else:
                self.cwnd += event.bytes_acked
                return

        off_target = (self.TARGET - self.queuing_delay) / self.TARGET
        self.cwnd += self.GAIN * off_target * event.bytes_acked * self.mss / self.cwnd

    def _on_dupack_loss(self, event: CcEvent) -> None:
        self.ssthresh = max(self.cwnd / 2.0, self.min_cwnd)
        self.cwnd = self.ssthresh
        self.in_slow_start = False

    def _on_timeout_loss(self, event: CcEvent) -> None:
        self.ssthresh = max(self.cwnd / 2.0, self.min_cwnd)
        self.cwnd = self.min_cwnd
        self.in_slow_start = False


class CopaLite(CongestionControl):
    """
    Copa in default mode. Target rate 1 / (delta * dq) packets/s with dq the standing queueing delay (standing RTT
    over the last srtt/2 minus the minimum RTT); the window moves towards the target by velocity / (delta * cwnd)
    packets per acked packet. The velocity doubles after three RTTs in the same direction and resets on a change.
    Pacing at 2 * cwnd / standing RTT.

    Simplifications: no competitive mode switching, minimum RTT over the whole run, losses only react to timeouts.
    """

    name = "copa_lite"

    DELTA = 0.5
    SRTT_GAIN = 0.125
    SAME_DIRECTION_ROUNDS = 3

    def __init__(self, mss: int = MSS):
        super().__init__(mss)
        self.min_rtt = math.inf
        self.srtt = None
        self.standing = deque()  # (time, rtt) monotone in rtt -> window minimum in front
        self.velocity = 1.0
        self.direction = 0
        self.same_direction_rounds = 0
        self.round_end = 0.0
        self.round_cwnd = self.cwnd

    def _standing_rtt(self, now: float, rtt: float) -> float:
        while self.standing and self.standing[-1][1] >= rtt:
            self.standing.pop()
        self.standing.append((now, rtt))

        window = self.srtt / 2.0
        while len(self.standing) > 1 and self.standing[0][0] < now - window:
            self.standing.popleft()

        return self.standing[0][1]

    def _on_ack(self, event: CcEvent) -> None:
        rtt = event.rtt_sample
        self.min_rtt = min(self.min_rtt, rtt)
        self.srtt = rtt if self.srtt is None else self.srtt + self.SRTT_GAIN * (rtt - self.srtt)

        rtt_standing = self._standing_rtt(event.now, rtt)
        dq = rtt_standing - self.min_rtt
        cwnd_packets = self.cwnd / self.mss

        target_rate = math.inf if dq <= 0.0 else 1.0 / (self.DELTA * dq)
        current_rate = cwnd_packets / rtt_standing
        step = self.velocity / (self.DELTA * cwnd_packets) * event.bytes_acked

        if current_rate <= target_rate:
            self.cwnd += step
        else:
            self.cwnd -= step

        if event.now >= self.round_end:
            new_direction = 1 if self.cwnd >= self.round_cwnd else -1

            if new_direction == self.direction:
                self.same_direction_rounds += 1
                if self.same_direction_rounds >= self.SAME_DIRECTION_ROUNDS:
                    self.velocity *= 2.0
            else:
                self.direction = new_direction
                self.same_direction_rounds = 0
                self.velocity = 1.0

            self.round_end = event.now + self.srtt
            self.round_cwnd = self.cwnd

        self.pacing_rate = 2.0 * max(self.cwnd, self.min_cwnd) * 8.0 / rtt_standing

    def _on_timeout_loss(self, event: CcEvent) -> None:
        self.cwnd = self.min_cwnd
        self.velocity = 1.0
        self.direction = 0
        self.same_direction_rounds = 0


# ----------------------------------------------------------------------------------------------------------------------
# MODEL-BASED SCHEMES --------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

class BbrMode(Enum):
    STARTUP = "startup"
    DRAIN = "drain"
    PROBE_BW = "probe_bw"
    PROBE_RTT = "probe_rtt"


class BbrLite(CongestionControl):
    """
    BBR (v1) state machine: STARTUP -> DRAIN -> PROBE_BW, with PROBE_RTT whenever the min-RTT estimate is older than
    10 s. Bandwidth is the maximum delivery-rate sample over the last 10 rounds, pacing rate = pacing_gain * max_bw,
    cwnd = cwnd_gain * BDP + 3 packets. PROBE_BW cycles the pacing gain through [1.25, 0.75, 1, 1, 1, 1, 1, 1], one
    phase per min RTT. PROBE_RTT holds cwnd at 4 packets for max(200 ms, min RTT), counted from the first ack that
    finds the flight drained to those 4 packets.

    The min-RTT estimate is only replaced by a strictly smaller sample (1 us resolution, as the kernel's microsecond
    counters) or once it is older than 10 s. Rate samples from PROBE_RTT and from the two min RTTs after it are
    app-limited: they enter the bandwidth filter only if they raise it.

    Simplifications: rounds are timed by the min RTT instead of packet-delivery marks, PROBE_BW phases are purely
    time based, the cycle starts in phase 2, losses are ignored.
    """

    name = "bbr_lite"

    HIGH_GAIN = 2.0 / math.log(2.0)
    PACING_GAIN_CYCLE = (1.25, 0.75, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
    CYCLE_START_INDEX = 2
    CWND_GAIN = 2.0
    BW_WINDOW_ROUNDS = 10
    MIN_RTT_WINDOW = 10.0  # [s]
    PROBE_RTT_DURATION = 0.2  # [s]
    PROBE_RTT_CWND_PACKETS = 4
    FULL_BW_GROWTH = 1.25
    FULL_BW_ROUNDS = 3
    RTT_RESOLUTION = 1e-6  # [s]
    APP_LIMITED_RTTS = 2

    def __init__(self, mss: int = MSS):
        super().__init__(mss)
        self.mode = BbrMode.STARTUP
        self.pacing_gain = self.HIGH_GAIN
        self.cwnd_gain = self.HIGH_GAIN

        self.round_count = 0
        self.round_end = 0.0
        self.bw_rounds = deque()  # (round, max rate of that round)
        self.max_bw = 0.0  # [bit/s]

        self.min_rtt = math.inf
        self.min_rtt_stamp = None

        self.full_bw = 0.0
        self.full_bw_count = 0
        self.filled_pipe = False

        self.cycle_index = self.CYCLE_START_INDEX
        self.cycle_stamp = 0.0

        self.probe_rtt_done = None
        self.prior_cwnd = self.cwnd
        self.app_limited_until = -math.inf

    @property
    def bdp(self) -> Optional[float]:
        if self.max_bw <= 0.0 or not math.isfinite(self.min_rtt):
            return None
        return self.max_bw / 8.0 * self.min_rtt

    def _update_bw(self, rate: float) -> None:
        if self.bw_rounds and self.bw_rounds[-1][0] == self.round_count:
            if rate > self.bw_rounds[-1][1]:
                self.bw_rounds[-1] = (self.round_count, rate)
        else:
            self.bw_rounds.append((self.round_count, rate))

        while self.bw_rounds[0][0] <= self.round_count - self.BW_WINDOW_ROUNDS:
            self.bw_rounds.popleft()

        self.max_bw = max(r for _, r in self.bw_rounds)

    def _check_full_pipe(self) -> None:
        if self.filled_pipe:
            return

        if self.max_bw >= self.full_bw * self.FULL_BW_GROWTH:
            self.full_bw = self.max_bw
            self.full_bw_count = 0
            return

        self.full_bw_count += 1
        if self.full_bw_count >= self.FULL_BW_ROUNDS:
            self.filled_pipe = True

    def _min_rtt_expired(self, now: float) -> bool:
        return self.min_rtt_stamp is not None and now - self.min_rtt_stamp > self.MIN_RTT_WINDOW

    def _enter_probe_bw(self, now: float) -> None:
        self.mode = BbrMode.PROBE_BW
        self.cwnd_gain = self.CWND_GAIN
        self.cycle_index = self.CYCLE_START_INDEX
        self.cycle_stamp = now
        self.pacing_gain = self.PACING_GAIN_CYCLE[self.cycle_index]

    def _enter_probe_rtt(self, now: float) -> None:
        self.prior_cwnd = self.cwnd
        self.mode = BbrMode.PROBE_RTT
        self.pacing_gain = 1.0
        self.probe_rtt_done = None
        self.cwnd = float(self.PROBE_RTT_CWND_PACKETS * self.mss)

    def _exit_probe_rtt(self, now: float) -> None:
        self.min_rtt_stamp = now
        self.probe_rtt_done = None

        rtt = self.min_rtt if math.isfinite(self.min_rtt) else 0.0
        self.app_limited_until = now + self.APP_LIMITED_RTTS * rtt

        if self.filled_pipe:
            self._enter_probe_bw(now)
        else:
            self.mode = BbrMode.STARTUP
            self.pacing_gain = self.HIGH_GAIN
            self.cwnd_gain = self.HIGH_GAIN

        self.cwnd = max(self.cwnd, self.prior_cwnd)

    def _update_mode(self, now: float, bytes_in_flight: Optional[int]) -> None:
        if self.mode is BbrMode.PROBE_RTT:
            if self.probe_rtt_done is None:
                if bytes_in_flight is not None and bytes_in_flight <= self.PROBE_RTT_CWND_PACKETS * self.mss:
                    rtt = self.min_rtt if math.isfinite(self.min_rtt) else 0.0
                    self.probe_rtt_done = now + max(self.PROBE_RTT_DURATION, rtt)
            elif now >= self.probe_rtt_done:
                self._exit_probe_rtt(now)
            return

        if self._min_rtt_expired(now):
            self._enter_probe_rtt(now)
            return

        if self.mode is BbrMode.STARTUP and self.filled_pipe:
            self.mode = BbrMode.DRAIN
            self.pacing_gain = 1.0 / self.HIGH_GAIN
            self.cwnd_gain = self.HIGH_GAIN

        if self.mode is BbrMode.DRAIN and bytes_in_flight is not None and self.bdp is not None \
                and bytes_in_flight <= self.bdp:
            self._enter_probe_bw(now)

        if self.mode is BbrMode.PROBE_BW and math.isfinite(self.min_rtt) \
                and now - self.cycle_stamp > self.min_rtt:
            self.cycle_index = (self.cycle_index + 1) % len(self.PACING_GAIN_CYCLE)
            self.cycle_stamp = now
            self.pacing_gain = self.PACING_GAIN_CYCLE[self.cycle_index]

    def _update_pacing(self) -> None:
        if self.max_bw > 0.0:
            self.pacing_rate = self.pacing_gain * self.max_bw

    def _on_ack(self, event: CcEvent) -> None:
        now = event.now
        rtt = event.rtt_sample

        if now >= self.round_end:
            self.round_count += 1
            self.round_end = now + (self.min_rtt if math.isfinite(self.min_rtt) else rtt)
            new_round = True
        else:
            new_round = False

        expired = self._min_rtt_expired(now)
        if rtt < self.min_rtt - self.RTT_RESOLUTION or expired:
            self.min_rtt = rtt
            self.min_rtt_stamp = now

        app_limited = self.mode is BbrMode.PROBE_RTT or now < self.app_limited_until
        if event.delivery_rate > 0.0 and (not app_limited or event.delivery_rate >= self.max_bw):
            self._update_bw(event.delivery_rate)

        if new_round:
            self._check_full_pipe()

        if expired and self.mode is not BbrMode.PROBE_RTT:
            self._enter_probe_rtt(now)
        else:
            self._update_mode(now, event.bytes_in_flight)

        if self.mode is not BbrMode.PROBE_RTT:
            bdp = self.bdp

            if bdp is None:
                self.cwnd += event.bytes_acked
            else:
                target = self.cwnd_gain * bdp + 3 * self.mss
                if self.filled_pipe:
                    self.cwnd = min(self.cwnd + event.bytes_acked, target)
                elif self.cwnd < target:
                    self.cwnd += event.bytes_acked

        self.cwnd = max(self.cwnd, float(self.PROBE_RTT_CWND_PACKETS * self.mss))
        self._update_pacing()

    def _on_timer_tick(self, event: CcEvent) -> None:
        self._update_mode(event.now, None)
        self._update_pacing()


# ----------------------------------------------------------------------------------------------------------------------
# ROSTER ---------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

SCHEMES: Dict[str, Type[CongestionControl]] = {
    NewReno.name: NewReno,
    Cubic.name: Cubic,
    Vegas.name: Vegas,
    Ledbat.name: Ledbat,
    BbrLite.name: BbrLite,
    CopaLite.name: CopaLite,
    WestwoodLike.name: WestwoodLike
}

REQUIRED_ROSTER = ("newreno", "cubic", "vegas", "ledbat", "bbr_lite")


def roster() -> List[str]:
    return list(SCHEMES.keys())


def make_scheme(scheme_id: str, mss: int = MSS) -> CongestionControl:
    if scheme_id not in SCHEMES:
        raise ValueError("Unknown congestion control scheme %s, available: %s" % (scheme_id, ", ".join(roster())))

    return SCHEMES[scheme_id](mss=mss)
