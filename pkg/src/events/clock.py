"""
Discrete-event engine for the fixed-computation-speed model.

Worker i needs exactly s_i virtual time units per gradient; communication and server time are
zero unless a latency is configured. The engine only decides *who* contributes *when* and on
*which model version*; it never touches model values, so one trace can drive any algorithm.
"""

import heapq
from collections import deque
from typing import Deque, Iterator, List, Optional, Tuple

import numpy as np

from src.calculations.ledger import DelayLedger
from src.config.constants import DispatchPolicy, ModeKind
from src.objectives.sampling import DISPATCH_SALT, SPEED_SALT, keyed_rng


class SpeedModel:
    """Per-worker compute times s_i ~ TN(mu, std) truncated to (0, inf) by rejection."""

    def __init__(self, n: int, mu: float = 1.0, std: float = 1.0, seed: int = 0, speeds=None):
        assert n >= 1, "need at least one worker"
        self.n = n
        self.mu = float(mu)
        self.std = float(std)
        self.seed = int(seed)
        if speeds is None:
            assert std > 0, "speed std must be positive"
            rng = keyed_rng(seed, SPEED_SALT)
            drawn = []
            for _ in range(n):
                s = rng.normal(mu, std)
                while s <= 0:
                    s = rng.normal(mu, std)
                drawn.append(s)
            speeds = drawn
        speeds = np.asarray(speeds, dtype=np.float64)
        assert speeds.shape == (n,), "need one speed per worker"
        assert np.all(speeds > 0), "all speeds must be positive"
        self.speeds = speeds

    @classmethod
    def fixed(cls, speeds) -> "SpeedModel":
        """Speed model with explicit per-worker times."""
        speeds = list(speeds)
        return cls(len(speeds), mu=float(np.mean(speeds)), std=0.0, speeds=speeds)

    def scaled(self, factor: float) -> "SpeedModel":
        """Same workers doing `factor` gradients per round (e.g. K local steps)."""
        scaled = SpeedModel.fixed(self.speeds * factor)
        scaled.seed = self.seed
        return scaled

    def __repr__(self):
        return f"SpeedModel(n={self.n}, mu={self.mu}, std={self.std}, seed={self.seed})"


class AsyncMode:
    """fully_async == semi_async(1); lockstep == semi_async(n) with a barrier."""

    def __init__(self, kind: ModeKind, c: int = 1):
        kind = ModeKind(kind)
        if kind == ModeKind.FULLY_ASYNC:
            c = 1
        assert c >= 1, "semi-async batch must be >= 1"
        self.kind = kind
        self.c = int(c)

    @classmethod
    def fully_async(cls) -> "AsyncMode":
        return cls(ModeKind.FULLY_ASYNC, 1)

    @classmethod
    def semi_async(cls, c: int) -> "AsyncMode":
        return cls(ModeKind.SEMI_ASYNC, c)

    @classmethod
    def lockstep(cls, n: int) -> "AsyncMode":
        return cls(ModeKind.LOCKSTEP, n)

    def batch(self, n: int) -> int:
        """Number of distinct completions the server waits for."""
        c = n if self.kind == ModeKind.LOCKSTEP else self.c
        assert 1 <= c <= n, f"batch size {c} outside [1, {n}]"
        return c

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "c": self.c}

    def __eq__(self, other) -> bool:
        return isinstance(other, AsyncMode) and self.kind == other.kind and self.c == other.c

    def __repr__(self):
        return f"AsyncMode({self.kind.value}, c={self.c})"


class Event:
    """Completion of a worker's seq-th gradient; ordered by (time, worker_id, seq)."""

    __slots__ = ("time", "worker_id", "seq")

    def __init__(self, time: float, worker_id: int, seq: int):
        self.time = time
        self.worker_id = worker_id
        self.seq = seq

    def key(self) -> Tuple[float, int, int]:
        return (self.time, self.worker_id, self.seq)

    def __lt__(self, other: "Event") -> bool:
        return self.key() < other.key()

    def __repr__(self):
        return f"Event(time={self.time:g}, worker={self.worker_id}, seq={self.seq})"


class EventQueue:
    """Priority queue of completion events that refuses events in the past."""

    def __init__(self):
        self._heap: List[Event] = []
        self.now = 0.0

    def __len__(self):
        return len(self._heap)

    def push(self, event: Event) -> None:
        if event.time < self.now:
            raise RuntimeError(f"event {event} scheduled in the past (now={self.now:g})")
        heapq.heappush(self._heap, event)

    def pop(self) -> Event:
        event = heapq.heappop(self._heap)
        self.now = event.time
        return event


class TraceEntry:
    """One server iteration: who contributed, on which model versions, and where models went."""

    __slots__ = ("t", "time", "contributors", "model_versions", "dispatched_to", "queue_depths")

    def __init__(self, t, time, contributors, model_versions, dispatched_to, queue_depths):
        self.t = t
        self.time = time
        self.contributors = tuple(contributors)
        self.model_versions = tuple(model_versions)
        self.dispatched_to = tuple(dispatched_to)
        self.queue_depths = tuple(queue_depths)

    def versions(self) -> dict:
        return dict(zip(self.contributors, self.model_versions))

    def __repr__(self):
        return f"TraceEntry(t={self.t}, time={self.time:g}, contributors={self.contributors})"


class Trace:
    """Ordered server iterations t = 2, 3, ... following the t = 1 initialisation round."""

    def __init__(self, speeds: SpeedModel, mode: AsyncMode, dispatch: DispatchPolicy, entries: List[TraceEntry]):
        self.speeds = speeds
        self.mode = mode
        self.dispatch = dispatch
        self.entries = entries
        self.n = speeds.n

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[TraceEntry]:
        return iter(self.entries)

    def __getitem__(self, idx):
        return self.entries[idx]

    def contributor_sequence(self) -> list:
        return [e.contributors for e in self.entries]

    def participation(self) -> np.ndarray:
        """Fraction of contributions made by each worker."""
        counts = np.zeros(self.n)
        for e in self.entries:
            for j in e.contributors:
                counts[j] += 1
        return counts / max(counts.sum(), 1)

    def max_queue_depth(self) -> np.ndarray:
        depth = np.ones(self.n, dtype=np.int64)
        for e in self.entries:
            depth = np.maximum(depth, e.queue_depths)
        return depth

    def delay_snapshots(self) -> Iterator[Tuple[TraceEntry, np.ndarray, np.ndarray]]:
        """Replay the delay ledger, yielding (entry, tau, d) after every iteration."""
        ledger = DelayLedger(self.n)
        for entry in self.entries:
            ledger.advance(entry.versions())
            yield entry, ledger.tau, ledger.d

    def to_records(self) -> list:
        """JSON-ready rows {t, time, contributors, tau, d, queue_depths}."""
        return [
            {
                "t": e.t,
                "time": e.time,
                "contributors": list(e.contributors),
                "tau": tau.tolist(),
                "d": d.tolist(),
                "queue_depths": list(e.queue_depths),
            }
            for e, tau, d in self.delay_snapshots()
        ]


class _Dispatcher:
    """Chooses which worker receives each freshly produced model."""

    def __init__(self, policy: DispatchPolicy, n: int, seed: int, shuffle_period: Optional[int]):
        self.policy = DispatchPolicy(policy)
        self.n = n
        self.rng = keyed_rng(seed, DISPATCH_SALT)
        self.shuffle_period = shuffle_period or n
        assert self.shuffle_period >= 1, "shuffle period must be >= 1"
        self._order: List[int] = []

    def targets(self, contributors: List[int]) -> List[int]:
        if self.policy == DispatchPolicy.RETURN:
            return list(contributors)
        if self.policy == DispatchPolicy.UNIFORM:
            return [int(self.rng.integers(self.n))]
        if not self._order:
            # one reshuffle per period; a period longer than n cycles through repeated permutations
            perm = []
            while len(perm) < self.shuffle_period:
                perm.extend(int(k) for k in self.rng.permutation(self.n))
            self._order = perm[: self.shuffle_period]
        return [self._order.pop(0)]


def schedule_run(
    speeds: SpeedModel,
    mode: AsyncMode,
    T: int,
    dispatch: DispatchPolicy = DispatchPolicy.RETURN,
    seed: int = 0,
    shuffle_period: Optional[int] = None,
    latency: float = 0.0,
) -> Trace:
    """
    Produce T server iterations (t = 2..T+1). After the initialisation round every worker
    holds model version 1 at time 0. Fully-async: each completion is one iteration. Semi-async(c):
    the server waits for the first c distinct completions since its last update; contributors
    idle until the new model reaches them. `latency` delays every model delivery (default 0).
    """
    assert T >= 1, "need at least one iteration"
    assert latency >= 0, "latency must be non-negative"
    n = speeds.n
    c = mode.batch(n)
    dispatch = DispatchPolicy(dispatch)
    if c > 1 and dispatch != DispatchPolicy.RETURN:
        raise ValueError("uniform/shuffled dispatch is defined for fully asynchronous runs only")
    dispatcher = _Dispatcher(dispatch, n, seed, shuffle_period)

    queue = EventQueue()
    current: List[Optional[int]] = [None] * n
    backlog: List[Deque[int]] = [deque() for _ in range(n)]
    completions = [0] * n

    def start(worker: int, version: int, now: float) -> None:
        current[worker] = version
        completions[worker] += 1
        queue.push(Event(now + speeds.speeds[worker], worker, completions[worker]))

    def deliver(worker: int, version: int, now: float) -> None:
        if current[worker] is None:
            start(worker, version, now)
        else:
            backlog[worker].append(version)

    for i in range(n):
        start(i, 1, latency)

    entries: List[TraceEntry] = []
    t = 1
    while len(entries) < T:
        batch = [queue.pop() for _ in range(c)]
        now = batch[-1].time
        contributors = sorted(ev.worker_id for ev in batch)
        assert len(set(contributors)) == c, "a worker completed twice within one batch"
        versions = [current[j] for j in contributors]
        t += 1
        for j in contributors:
            current[j] = None
            if backlog[j]:
                start(j, backlog[j].popleft(), now)
        targets = dispatcher.targets(contributors)
        for k in targets:
            deliver(k, t, now + latency)
        depths = [len(backlog[k]) + (current[k] is not None) for k in range(n)]
        entries.append(TraceEntry(t, now, contributors, versions, targets, depths))
    return Trace(speeds, mode, dispatch, entries)


def observed_delays(trace: Trace) -> Tuple[int, float]:
    """Exact max and mean of tau_i(t) over all workers and iterations, initialisation included."""
    tau_max = 1
    tau_sum = float(trace.n)  # t = 1: tau_i(1) = 1 for all i
    count = trace.n
    for _, tau, _ in trace.delay_snapshots():
        tau_max = max(tau_max, int(tau.max()))
        tau_sum += float(tau.sum())
        count += trace.n
    return tau_max, tau_sum / count
