"""Defines reusable run-record events"""

import numpy as np

from src.algorithms.base import StepOutcome
from src.calculations.model import ModelVector
from src.config.exceptions import NumericalBlowUp
from src.events.clock import TraceEntry
from src.events.event_constants import EventConstants
from src.objectives.objective import StochasticObjective
from src.state.books import RunBook, RunRecord


def init_event(book: RunBook, obj: StochasticObjective, w0: ModelVector, w1: ModelVector) -> None:
    """Record the t = 1 round: all workers contributed on w^0 at virtual time 0."""
    n = obj.n
    record = RunRecord(
        t=1,
        virtual_time=0.0,
        loss=obj.loss(w1),
        grad_norm_sq=obj.grad_norm_sq(w0),
        contributors=range(n),
        tau=np.ones(n, dtype=np.int64),
        d=np.zeros(n, dtype=np.int64),
        queue_depths=np.ones(n, dtype=np.int64),
        record_type=EventConstants.INIT.value,
    )
    book.add_record(record)


def update_event(
    book: RunBook,
    obj: StochasticObjective,
    w_prev: ModelVector,
    outcome: StepOutcome,
    entry: TraceEntry,
) -> None:
    """Record w^t after one server step; the gradient norm is taken at w^{t-1}."""
    ledger = outcome.server.ledger
    loss, grad_norm_sq = obj.loss(outcome.server.w_tilde), obj.grad_norm_sq(w_prev)
    if not (np.isfinite(loss) and np.isfinite(grad_norm_sq)):
        raise NumericalBlowUp("non-finite loss or gradient norm", iteration=outcome.t)
    record = RunRecord(
        t=outcome.t,
        virtual_time=outcome.time,
        loss=loss,
        grad_norm_sq=grad_norm_sq,
        contributors=outcome.contributors,
        tau=ledger.tau,
        d=ledger.d,
        queue_depths=entry.queue_depths,
        record_type=EventConstants.UPDATE.value,
    )
    book.add_record(record)


def header_event(config, seed: int, algorithm: str, eta: float) -> dict:
    """Self-describing header: schema version, config hash, seed and the resolved config."""
    return {
        "type": EventConstants.HEADER.value,
        "schema_version": config.run["schema_version"],
        "config_hash": config.config_hash(),
        "seed": int(seed),
        "algorithm": algorithm,
        "eta": float(eta),
        "config": config.to_dict(),
    }


def trace_events(trace) -> list:
    """One record per scheduled server iteration."""
    out = []
    for row in trace.to_records():
        row["type"] = EventConstants.TRACE.value
        out.append(row)
    return out
