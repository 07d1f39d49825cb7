"""Event ordering, delays and dispatch policies of the virtual clock."""

import numpy as np
import pytest

from src.config.constants import DispatchPolicy
from src.events.clock import AsyncMode, Event, EventQueue, SpeedModel, observed_delays, schedule_run
from src.objectives.sampling import DISPATCH_SALT, keyed_rng
from tests.simclock.clock_test_config import flat_contributors, fully_async_trace


def test_two_workers_tie_goes_to_lower_id():
    """
    s = [1, 2]: worker 0 finishes at 1 and 2, worker 1 at 2; the tie at time 2 goes
    to worker 0 first.
    """
    trace = fully_async_trace([1.0, 2.0], 5)
    assert flat_contributors(trace) == [0, 0, 1, 0, 0]
    assert [e.time for e in trace] == [1.0, 2.0, 2.0, 3.0, 4.0]
    assert [e.t for e in trace] == [2, 3, 4, 5, 6]
    assert [e.model_versions[0] for e in trace] == [1, 2, 1, 3, 5]


def test_slow_worker_contribution_count_and_staleness():
    """
    s = [1, 10]: worker 1 contributes every 11 iterations (t = 12, 23, ..., 100) on a model
    11 versions old; its buffer reaches age 21 just before each refresh.
    """
    trace = fully_async_trace([1.0, 10.0], 99)
    slow = [e for e in trace if e.contributors == (1,)]
    assert [e.t for e in slow] == list(range(12, 101, 11))
    assert all(e.t - e.model_versions[0] == 11 for e in slow)
    tau_max, _ = observed_delays(trace)
    assert tau_max == 21


def test_equal_speeds_round_robin():
    trace = fully_async_trace([1.0] * 4, 12)
    assert flat_contributors(trace) == [0, 1, 2, 3] * 3


@pytest.mark.parametrize("c, expected", [(1, 15), (2, 7), (4, 3), (8, 1)])
def test_semi_async_equal_speeds_tau_max(c, expected):
    "Buffers age up to 2n/c - 1 iterations between refreshes."
    mode = AsyncMode.fully_async() if c == 1 else AsyncMode.semi_async(c)
    trace = schedule_run(SpeedModel.fixed([1.0] * 8), mode, 400)
    tau_max, _ = observed_delays(trace)
    assert tau_max == expected
    assert abs(tau_max - 15 / c) <= 1


def test_semi_async_contributor_sets():
    trace = schedule_run(SpeedModel.fixed([1.0] * 6), AsyncMode.semi_async(3), 6)
    assert trace.contributor_sequence()[:2] == [(0, 1, 2), (3, 4, 5)]
    assert all(len(e.contributors) == 3 for e in trace)


def test_lockstep_and_single_worker_are_fresh():
    speeds = SpeedModel(5, mu=1.0, std=1.0, seed=3)
    lock = schedule_run(speeds, AsyncMode.lockstep(5), 50)
    assert observed_delays(lock) == (1, 1.0)
    assert all(e.contributors == (0, 1, 2, 3, 4) for e in lock)
    single = fully_async_trace([2.5], 30)
    assert observed_delays(single)[0] == 1


def test_lockstep_waits_for_slowest():
    trace = schedule_run(SpeedModel.fixed([1.0, 3.0]), AsyncMode.lockstep(2), 3)
    assert [e.time for e in trace] == [3.0, 6.0, 9.0]


def test_delay_snapshots_hold_dual_delay_invariant():
    speeds = SpeedModel(6, mu=1.0, std=5.0, seed=1)
    for mode in (AsyncMode.fully_async(), AsyncMode.semi_async(3)):
        for _, tau, d in schedule_run(speeds, mode, 2000).delay_snapshots():
            assert np.all(tau >= d + 1)


def test_uniform_dispatch_backlogs_slow_worker():
    trace = fully_async_trace([1.0, 10.0], 1000, dispatch=DispatchPolicy.UNIFORM, seed=0)
    assert trace.max_queue_depth()[1] > 1
    assert all(len(e.dispatched_to) == 1 for e in trace)


def test_return_dispatch_never_queues():
    trace = fully_async_trace([1.0, 10.0], 500)
    assert trace.max_queue_depth().tolist() == [1, 1]


def test_shuffled_dispatch_covers_every_worker_each_period():
    n = 4
    trace = fully_async_trace([1.0, 2.0, 3.0, 4.0], 40, dispatch=DispatchPolicy.SHUFFLED, seed=5)
    targets = [e.dispatched_to[0] for e in trace]
    for k in range(0, 40, n):
        assert sorted(targets[k : k + n]) == list(range(n))


def test_uniform_dispatch_counts_within_binomial_band():
    """10^4 uniform targets over 4 workers: each count within 3 standard deviations of N/4."""
    N, n = 10_000, 4
    trace = fully_async_trace([1.0] * n, N, dispatch=DispatchPolicy.UNIFORM, seed=0)
    counts = np.bincount([e.dispatched_to[0] for e in trace], minlength=n)
    band = 3 * np.sqrt(N * (1 / n) * (1 - 1 / n))
    assert counts.sum() == N
    assert np.all(np.abs(counts - N / n) <= band)


@pytest.mark.parametrize("seed", [0, 7])
def test_shuffled_dispatch_follows_seeded_permutations(seed):
    """Targets are successive permutations from the run's dispatch generator, one per period."""
    n, T = 3, 30
    trace = fully_async_trace([1.0, 2.0, 5.0], T, dispatch=DispatchPolicy.SHUFFLED, seed=seed)
    rng = keyed_rng(seed, DISPATCH_SALT)
    expected = []
    while len(expected) < T:
        expected.extend(int(k) for k in rng.permutation(n))
    assert [e.dispatched_to[0] for e in trace] == expected[:T]


def test_shuffled_dispatch_depends_on_seed():
    targets = [
        [e.dispatched_to[0] for e in fully_async_trace([1.0] * 4, 40, dispatch=DispatchPolicy.SHUFFLED, seed=s)]
        for s in (0, 1)
    ]
    assert targets[0] != targets[1]


def test_non_fresh_dispatch_needs_fully_async():
    with pytest.raises(ValueError):
        schedule_run(SpeedModel.fixed([1.0, 1.0]), AsyncMode.semi_async(2), 5, dispatch=DispatchPolicy.UNIFORM)


def test_latency_delays_delivery():
    trace = fully_async_trace([1.0], 1)
    assert trace[0].time == 1.0
    delayed = schedule_run(SpeedModel.fixed([1.0]), AsyncMode.fully_async(), 3, latency=0.5)
    assert [e.time for e in delayed] == [1.5, 3.0, 4.5]


def test_same_seed_same_trace():
    speeds = SpeedModel(5, mu=1.0, std=1.0, seed=2)
    a = schedule_run(speeds, AsyncMode.fully_async(), 300, dispatch=DispatchPolicy.UNIFORM, seed=4)
    b = schedule_run(speeds, AsyncMode.fully_async(), 300, dispatch=DispatchPolicy.UNIFORM, seed=4)
    assert a.contributor_sequence() == b.contributor_sequence()
    assert a.to_records() == b.to_records()


def test_trace_records():
    rows = fully_async_trace([1.0, 2.0], 2).to_records()
    assert rows[0] == {"t": 2, "time": 1.0, "contributors": [0], "tau": [1, 2], "d": [0, 1], "queue_depths": [1, 1]}


def test_participation_fractions():
    trace = fully_async_trace([1.0, 10.0], 99)
    assert trace.participation().tolist() == pytest.approx([90 / 99, 9 / 99])


def test_event_queue_order_and_past_events():
    queue = EventQueue()
    for ev in (Event(2.0, 1, 1), Event(1.0, 3, 1), Event(1.0, 0, 2)):
        queue.push(ev)
    assert [queue.pop().worker_id for _ in range(3)] == [0, 3, 1]
    with pytest.raises(RuntimeError):
        queue.push(Event(0.5, 0, 3))
