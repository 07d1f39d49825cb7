"""Buffered asynchronous federated averaging with K local SGD steps."""

from typing import List, Tuple

import numpy as np

from src.algorithms.base import StepOutcome, TrainingAlgorithm
from src.calculations.buffers import ServerState, WorkerState
from src.calculations.ledger import DelayLedger
from src.calculations.model import GradientRecord, ModelVector, check_finite
from src.config.constants import AlgorithmKind
from src.events.clock import TraceEntry


class FedBuff(TrainingAlgorithm):
    """
    Local:  w_i^{k} = w_i^{k-1} - eta_l grad f_i(w_i^{k-1}; xi_i^{t,k}),  k = 1..K
    Global: w^t = w^{t-1} - (eta_g / |C_t|) sum_{i in C_t} (w_i^0 - w_i^K)
    The resolved run stepsize is eta_l unless the parameters fix it.
    """

    kind = AlgorithmKind.FEDBUFF

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.eta_local = self.params.eta_local if self.params.eta_local is not None else self.eta
        self.eta_global = self.params.eta_global
        self.local_steps = self.params.local_steps

    def local_update(self, i: int, model: ModelVector, epoch: int) -> Tuple[np.ndarray, GradientRecord]:
        """Run K local steps from `model`; return w^0 - w^K and the first-step gradient."""
        w = model.values.copy()
        first = None
        for k in range(self.local_steps):
            local_model = ModelVector(w, model.version)
            grad = self.obj.stochastic_gradient(i, local_model, epoch, self.streams, substep=k)
            if first is None:
                first = grad
            w = w - self.eta_local * grad.values
            check_finite(w, f"local model of worker {i}", iteration=epoch)
        return model.values - w, first

    def apply(self, updates: List[np.ndarray]) -> np.ndarray:
        pseudo_grad = np.zeros(self.obj.p)
        for u in updates:
            pseudo_grad = pseudo_grad + u
        pseudo_grad = pseudo_grad / len(updates)
        new_values = self.server.w_tilde.values - self.eta_global * pseudo_grad
        check_finite(new_values, "model", iteration=self.server.w_tilde.version + 1)
        self.server.g_tilde = pseudo_grad
        self.server.w_tilde = self.server.w_tilde.advanced(new_values)
        return pseudo_grad

    def initialize(self, w0: ModelVector):
        """Every worker runs its K local steps from w^0 with epoch-1 samples; full aggregation."""
        updates, grads = [], []
        for i in range(self.n):
            u, g = self.local_update(i, w0, 1)
            updates.append(u)
            grads.append(g)
        self.workers = [WorkerState(i, self.speeds[i], grads[i], None) for i in range(self.n)]
        self.server = ServerState(w0, np.zeros(self.obj.p), DelayLedger(self.n))
        self.apply(updates)
        for worker in self.workers:
            worker.receive(self.server.w_tilde, 0.0)
        return self.server, self.workers

    def step(self, entry: TraceEntry) -> StepOutcome:
        models = self.collect(entry)
        updates, grads = [], []
        for j in self.ordered(entry):
            u, g = self.local_update(j, models[j], entry.t)
            self.workers[j].G_tilde = g
            updates.append(u)
            grads.append(g)
        pseudo_grad = self.apply(updates)
        self.server.ledger.advance({j: m.version for j, m in models.items()})
        self.dispatch(entry)
        return StepOutcome(self.server, entry.time, entry.contributors, grads, np.linalg.norm(pseudo_grad))
