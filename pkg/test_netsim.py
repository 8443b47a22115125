import numpy as np
import pytest

import cc_schemes
import netsim
from netsim import MSS, BandwidthTrace, BottleneckSimulator, LinkConfig


class FixedWindow(cc_schemes.CongestionControl):
    """Constant window and pacing rate, for driving the simulator directly"""

    name = "fixed"

    def __init__(self, cwnd_packets: int = 5, pacing_rate: float = None):
        super().__init__()
        self.cwnd = float(cwnd_packets * MSS)
        self.pacing_rate = pacing_rate


def _flat_link(bw: float, min_rtt: float, queue: int, horizon: float = float("inf")) -> LinkConfig:
    return LinkConfig(trace=BandwidthTrace.flat(bw, horizon=horizon), min_rtt=min_rtt, queue_capacity=queue)


# ----------------------------------------------------------------------------------------------------------------------
# LINK DESCRIPTION -----------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def test_serialization_time():
    assert netsim.serialization_time(1500, 12e6) == pytest.approx(0.001)
    assert netsim.serialization_time(1500, 48e6) == pytest.approx(0.00025)

    with pytest.raises(ValueError):
        netsim.serialization_time(1500, 0.0)

    with pytest.raises(ValueError):
        netsim.serialization_time(1500, -1.0)


def test_trace_validation():
    with pytest.raises(ValueError):
        BandwidthTrace(segments=((1.0, 12e6),))

    with pytest.raises(ValueError):
        BandwidthTrace(segments=((0.0, 12e6), (5.0, 24e6), (5.0, 48e6)))

    with pytest.raises(ValueError):
        BandwidthTrace(segments=((0.0, 0.0),))

    with pytest.raises(ValueError):
        BandwidthTrace(segments=((0.0, 250e6),))

    with pytest.raises(ValueError):
        LinkConfig(trace=BandwidthTrace.flat(12e6), min_rtt=0.0, queue_capacity=15000)

    with pytest.raises(ValueError):
        LinkConfig(trace=BandwidthTrace.flat(12e6), min_rtt=0.01, queue_capacity=1000)


def test_step_trace():
    trace = BandwidthTrace.step(48e6, 0.5, period=7.0, horizon=30.0)

    assert [t for t, _ in trace.segments] == [0.0, 7.0, 14.0, 21.0, 28.0]
    assert trace.rate_at(0.0) == 48e6
    assert trace.rate_at(6.99) == 48e6
    assert trace.rate_at(7.0) == 24e6
    assert trace.rate_at(29.5) == 48e6
    assert trace.capacity_bits(0.0, 14.0) == pytest.approx(7.0 * 48e6 + 7.0 * 24e6)
    assert trace.mean_rate(7.0, 14.0) == pytest.approx(24e6)
    assert trace.change_times(0.0, 15.0) == [7.0, 14.0]


# ----------------------------------------------------------------------------------------------------------------------
# SIMULATION EXAMPLES --------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def test_first_rtt_sample():
    link = _flat_link(12e6, 0.04, 150000)
    trace = netsim.simulate(link, [(cc_schemes.make_scheme("newreno"), 0.0, 1.0)])[0]

    # serialization 1 ms + 40 ms propagation on an idle link
    assert trace.rtt_samples[0] == pytest.approx(0.041)
    assert trace.ack_times[0] == pytest.approx(0.041)
    assert trace.ack_records[0] == (trace.ack_times[0], MSS, trace.rtt_samples[0])


def test_zero_packets():
    link = _flat_link(12e6, 0.04, 150000)
    trace = netsim.simulate(link, [(cc_schemes.make_scheme("cubic"), 0.5, 0.5)], until=1.0)[0]

    assert trace.ack_records == []
    assert trace.bytes_sent == 0


def test_burst_drop():
    # 5 packets at once: one in service, two in a 3000 B queue, two dropped
    link = _flat_link(12e6, 0.04, 3000)
    trace = netsim.simulate(link, [(FixedWindow(cwnd_packets=5), 0.0, 0.0005)], until=1.0)[0]

    assert trace.bytes_sent == 5 * MSS
    assert trace.drop_count == 2
    assert trace.bytes_dropped == 2 * MSS
    assert trace.ack_count == 3
    assert trace.ack_seqs == [0, 1, 2]
    assert trace.bytes_in_flight_end == 0


def test_pacing_spacing():
    # 1.2 Mbit/s pacing -> one 1500 B packet every 10 ms on an otherwise idle fast link
    link = _flat_link(100e6, 0.02, 150000)
    trace = netsim.simulate(link, [(FixedWindow(cwnd_packets=100, pacing_rate=1.2e6), 0.0, 1.0)])[0]

    gaps = np.diff(trace.ack_times)
    assert np.allclose(gaps, 0.01)


def test_stall_terminates_flow():
    # 1 kbit/s link: the first ack takes 12 s, the flow is declared stalled after 10 s without acks
    link = _flat_link(1e3, 0.04, 150000)
    trace = netsim.simulate(link, [(cc_schemes.make_scheme("newreno"), 0.0, 15.0)])[0]

    assert trace.stalled
    assert 10.0 <= trace.stall_time <= 10.1
    assert trace.timeout_events >= 1


def test_losses_in_small_buffer():
    link = _flat_link(12e6, 0.02, 7500)
    trace = netsim.simulate(link, [(cc_schemes.make_scheme("newreno"), 0.0, 5.0)])[0]

    assert trace.drop_count > 0
    assert 1 <= trace.loss_events <= trace.drop_count
    assert trace.bytes_sent == trace.bytes_acked + trace.bytes_dropped + trace.bytes_in_flight_end


def test_recovery_releases_packets_per_ack():
    link = _flat_link(12e6, 0.04, 150000)
    sim = BottleneckSimulator(link, [(FixedWindow(cwnd_packets=2), 0.0, 1.0)])
    flow = sim.flows[0]
    flow.active = True

    # nothing outstanding: recovery is over
    flow.in_recovery = True
    sim._try_send(flow)
    assert not flow.in_recovery
    assert flow.trace.bytes_sent == 2 * MSS

    # only acks release packets, at most the acked bytes plus one MSS each
    flow.in_recovery = True
    flow.cwnd = 20.0 * MSS
    sim._try_send(flow)
    assert flow.trace.bytes_sent == 2 * MSS

    sim._try_send(flow, budget=2 * MSS)
    assert flow.trace.bytes_sent == 4 * MSS

    flow.in_recovery = False
    sim._try_send(flow, budget=2 * MSS)
    assert flow.trace.bytes_sent == 20 * MSS


def test_loss_recovery_in_simulation():
    # slow start overshoot into a 10 packet queue
    link = _flat_link(12e6, 0.04, 15000)
    sim = BottleneckSimulator(link, [(cc_schemes.make_scheme("newreno"), 0.0, 3.0)])
    trace = sim.run()[0]

    assert trace.loss_events >= 1
    assert not trace.stalled
    assert trace.ack_times[-1] > 2.5
    assert trace.bytes_sent == trace.bytes_acked + trace.bytes_dropped + trace.bytes_in_flight_end


def test_invalid_flow_times():
    link = _flat_link(12e6, 0.02, 15000, horizon=10.0)

    with pytest.raises(ValueError):
        netsim.simulate(link, [(cc_schemes.make_scheme("newreno"), 0.0, 20.0)])

    with pytest.raises(ValueError):
        netsim.simulate(link, [(cc_schemes.make_scheme("newreno"), 2.0, 1.0)])

    with pytest.raises(ValueError):
        netsim.simulate(link, [])


# ----------------------------------------------------------------------------------------------------------------------
# INVARIANTS ON A RANDOMIZED SUITE -------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def _random_setup(rng: np.random.RandomState, duration: float = 2.0):
    bw = rng.uniform(4e6, 30e6)
    min_rtt = rng.uniform(0.005, 0.1)
    queue = max(int(rng.uniform(0.5, 4.0) * bw * min_rtt / 8.0), MSS)

    if rng.rand() < 0.5:
        trace = BandwidthTrace.flat(bw, horizon=duration)
    else:
        trace = BandwidthTrace.step(bw, rng.choice([0.25, 0.5, 2.0, 4.0]), period=rng.uniform(0.3, 1.0),
                                    horizon=duration)

    schemes = cc_schemes.roster()
    flows = [(schemes[rng.randint(len(schemes))], float(rng.uniform(0.0, 0.5))) for _ in range(rng.randint(1, 4))]

    return LinkConfig(trace=trace, min_rtt=min_rtt, queue_capacity=queue), flows, duration


def _run(link, flows, duration):
    sim = BottleneckSimulator(link, [(cc_schemes.make_scheme(s), start, duration) for s, start in flows])
    return sim, sim.run()


def test_simulator_invariants_randomized():
    rng = np.random.RandomState(42)

    for _ in range(100):
        link, flows, duration = _random_setup(rng)
        sim, traces = _run(link, flows, duration)

        # queue never exceeds its capacity
        assert sim.max_queue_bytes <= link.queue_capacity

        departures = []
        for trace in traces:
            # conservation
            assert trace.bytes_sent == trace.bytes_acked + trace.bytes_dropped + trace.bytes_in_flight_end

            # rtt floor
            assert all(rtt >= link.min_rtt - 1e-12 for rtt in trace.rtt_samples)

            # fifo per flow
            assert all(a < b for a, b in zip(trace.ack_seqs[:-1], trace.ack_seqs[1:]))
            assert all(a <= b for a, b in zip(trace.ack_times[:-1], trace.ack_times[1:]))

            departures.extend(t - link.min_rtt for t in trace.ack_times)

        # capacity bound: one packet of slack for the packet in service at t1 and per rate change
        departures = np.sort(np.asarray(departures))
        for t1, t2 in np.sort(rng.uniform(0.0, duration, size=(10, 2)), axis=1):
            departed = np.count_nonzero((departures > t1) & (departures <= t2)) * MSS
            slack = MSS * (1 + len(link.trace.change_times(t1, t2)))
            assert departed <= link.trace.capacity_bits(t1, t2) / 8.0 + slack + 1e-6


def test_simulator_determinism():
    rng = np.random.RandomState(7)

    for _ in range(10):
        link, flows, duration = _random_setup(rng)
        _, traces_a = _run(link, flows, duration)
        _, traces_b = _run(link, flows, duration)

        assert traces_a == traces_b
