import numpy as np

from src.calculations.buffers import ServerState, WorkerState
from src.calculations.ledger import DelayLedger
from src.calculations.model import GradientRecord, ModelVector


def make_grad(values, worker_id: int = 0, model_version: int = 0, sample_epoch: int = 1) -> GradientRecord:
    return GradientRecord(values, model_version=model_version, sample_epoch=sample_epoch, worker_id=worker_id)


def make_workers(grads, speed: float = 1.0):
    """One worker per initial gradient row, none computing yet."""
    return [WorkerState(i, speed, make_grad(g, worker_id=i), None) for i, g in enumerate(grads)]


def make_server(workers, w0=None) -> ServerState:
    """Server whose g~ is the exact average of the workers' buffers."""
    p = workers[0].G_tilde.values.shape[0]
    w0 = ModelVector(np.zeros(p) if w0 is None else w0, version=0)
    g = sum(w.G_tilde.values for w in workers) / len(workers)
    return ServerState(w0, g, DelayLedger(len(workers)))
