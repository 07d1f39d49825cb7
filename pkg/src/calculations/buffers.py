"""Worker and server memory for incremental full aggregation."""

from collections import deque
from typing import Deque, List, Optional

import numpy as np

from src.calculations.ledger import DelayLedger
from src.calculations.model import GradientRecord, ModelVector, check_finite
from src.config.constants import AGGREGATION_RTOL
from src.config.exceptions import DimensionMismatch, InvariantBreach


class WorkerState:
    """Worker id, compute speed, last-sent gradient buffer and model(s) awaiting computation."""

    def __init__(self, worker_id: int, speed: float, G_tilde: GradientRecord, in_flight_model: ModelVector):
        assert speed > 0, f"worker {worker_id} speed must be positive"
        assert G_tilde.worker_id == worker_id, "gradient buffer belongs to another worker"
        self.id = worker_id
        self.speed = float(speed)
        self.G_tilde = G_tilde
        self.in_flight_model = in_flight_model
        self.busy_until = 0.0
        # Models dispatched while busy, processed FIFO.
        self.backlog: Deque[ModelVector] = deque()

    def receive(self, model: ModelVector, now: float) -> None:
        """Accept a dispatched model, starting it now if idle or queueing it otherwise."""
        if self.in_flight_model is None:
            self.in_flight_model = model
            self.busy_until = now + self.speed
        else:
            self.backlog.append(model)

    def finish(self) -> ModelVector:
        """Hand back the model just computed on and pull the next queued one, if any."""
        done = self.in_flight_model
        assert done is not None, f"worker {self.id} finished without a model"
        self.in_flight_model = self.backlog.popleft() if self.backlog else None
        if self.in_flight_model is not None:
            self.busy_until += self.speed
        return done

    @property
    def queue_depth(self) -> int:
        return len(self.backlog) + (self.in_flight_model is not None)

    def __repr__(self):
        return f"WorkerState(id={self.id}, speed={self.speed}, queue_depth={self.queue_depth})"


class ServerState:
    """Server buffers w~ and g~ plus the delay ledger."""

    def __init__(self, w_tilde: ModelVector, g_tilde: np.ndarray, ledger: DelayLedger):
        g_tilde = np.array(g_tilde, dtype=np.float64)
        if g_tilde.shape != w_tilde.values.shape:
            raise DimensionMismatch("aggregated gradient and model dimensions differ")
        self.w_tilde = w_tilde
        self.g_tilde = g_tilde
        self.ledger = ledger

    @property
    def t(self) -> int:
        return self.ledger.t

    @property
    def tau_max_observed(self) -> int:
        return self.ledger.tau_max_observed


def buffer_delta(new_grad: GradientRecord, worker: WorkerState) -> np.ndarray:
    """Return delta = G_new - G~ and replace the worker's buffer with G_new."""
    if new_grad.worker_id != worker.id:
        raise InvariantBreach("gradient routed to the wrong worker buffer", worker.id, new_grad.sample_epoch)
    if new_grad.values.shape != worker.G_tilde.values.shape:
        raise DimensionMismatch(
            f"gradient dimension {new_grad.values.shape} != buffer dimension {worker.G_tilde.values.shape}"
        )
    delta = new_grad.values - worker.G_tilde.values
    worker.G_tilde = new_grad
    return delta


def server_apply(server: ServerState, delta: np.ndarray, n: int, eta: float) -> ServerState:
    """g~ <- g~ + delta / n, then w~ <- w~ - eta * g~ (version incremented)."""
    assert eta > 0, "stepsize must be positive"
    if delta.shape != server.g_tilde.shape:
        raise DimensionMismatch("delta and aggregated gradient dimensions differ")
    server.g_tilde = server.g_tilde + delta / n
    check_finite(server.g_tilde, "aggregated gradient", iteration=server.w_tilde.version + 1)
    server.w_tilde = server.w_tilde.advanced(server.w_tilde.values - eta * server.g_tilde)
    return server


def aggregate_buffers(workers: List[WorkerState]) -> np.ndarray:
    """Brute-force (1/n) sum_i G~_i in ascending worker id order."""
    total = np.zeros_like(workers[0].G_tilde.values)
    for worker in sorted(workers, key=lambda w: w.id):
        total = total + worker.G_tilde.values
    return total / len(workers)


def aggregation_error(server: ServerState, workers: List[WorkerState]) -> float:
    """||g~ - (1/n) sum_i G~_i|| / (1 + ||g~||)."""
    diff = server.g_tilde - aggregate_buffers(workers)
    return float(np.linalg.norm(diff) / (1.0 + np.linalg.norm(server.g_tilde)))


def check_aggregation(server: ServerState, workers: List[WorkerState], rtol: Optional[float] = None) -> None:
    """Debug oracle: the incremental buffer must equal the full re-aggregation."""
    rtol = AGGREGATION_RTOL if rtol is None else rtol
    err = aggregation_error(server, workers)
    if err > rtol:
        raise InvariantBreach(f"incremental aggregate drifted from full average (rel err {err:.3e})", None, server.t)
