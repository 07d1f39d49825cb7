"""Dual-delayed ASGD: full aggregation of every worker's latest (stale) stochastic gradient."""

from typing import Dict, Tuple

import numpy as np

from src.algorithms.base import StepOutcome, TrainingAlgorithm
from src.calculations.buffers import buffer_delta, check_aggregation, server_apply
from src.calculations.model import ModelVector
from src.config.constants import AlgorithmKind
from src.events.clock import TraceEntry
from src.objectives.sampling import SampleStreams


class DudeAsgd(TrainingAlgorithm):
    """
    Workers send delta = G_new - G~; the server keeps g~ = (1/n) sum_i G~_i incrementally.
    With |C_t| > 1 (semi-async) the per-contributor deltas are summed before one server step.
    """

    kind = AlgorithmKind.DUDE_ASGD

    def __init__(self, *args, record_history: bool = False, **kwargs):
        super().__init__(*args, **kwargs)
        self.record_history = record_history or self.params.debug_oracle
        self.history: Dict[int, ModelVector] = {}

    def initialize(self, w0: ModelVector):
        out = super().initialize(w0)
        if self.record_history:
            self.history[0] = w0
            self.history[1] = self.server.w_tilde
        return out

    def sample_epoch(self, model: ModelVector, t: int) -> int:
        """Fresh sample: drawn at the iteration in which the gradient is consumed."""
        return t

    def ledger_epochs(self, models: Dict[int, ModelVector], t: int):
        return None

    def step(self, entry: TraceEntry) -> StepOutcome:
        models = self.collect(entry)
        t = entry.t
        delta = np.zeros(self.obj.p)
        grads = []
        for j in self.ordered(entry):
            grad = self.obj.stochastic_gradient(j, models[j], self.sample_epoch(models[j], t), self.streams)
            delta = delta + buffer_delta(grad, self.workers[j])
            grads.append(grad)
        server_apply(self.server, delta, self.n, self.eta)
        self.server.ledger.advance({j: m.version for j, m in models.items()}, self.ledger_epochs(models, t))
        if self.params.debug_oracle:
            check_aggregation(self.server, self.workers)
        if self.record_history:
            self.history[t] = self.server.w_tilde
        self.dispatch(entry)
        return StepOutcome(self.server, entry.time, entry.contributors, grads, np.linalg.norm(delta))

    def gradient_identity_error(self, seed: int) -> Tuple[float, np.ndarray]:
        """
        Recompute g^t = (1/n) sum_i grad f_i(w^{t - tau_i}; xi_i^{t - d_i}) from the stored
        (model_version, sample_epoch) stamps and compare with the incremental buffer.
        """
        assert self.record_history, "enable record_history to recompute the aggregate"
        replay = SampleStreams(seed, check_reuse=False)
        total = np.zeros(self.obj.p)
        for worker in sorted(self.workers, key=lambda w: w.id):
            stamp = worker.G_tilde
            model = self.history[stamp.model_version]
            total = total + self.obj.stochastic_gradient(worker.id, model, stamp.sample_epoch, replay).values
        oracle = total / self.n
        err = np.linalg.norm(self.server.g_tilde - oracle) / (1.0 + np.linalg.norm(oracle))
        return float(err), oracle


class SiagMifa(DudeAsgd):
    """
    Full aggregation with synchronised delays tau_i(t) = d_i(t) + 1: a worker draws its sample
    right after receiving a model, so each slot's sample epoch is its model version + 1.
    """

    kind = AlgorithmKind.SIAG_MIFA

    def sample_epoch(self, model: ModelVector, t: int) -> int:
        return model.version + 1

    def ledger_epochs(self, models: Dict[int, ModelVector], t: int):
        return {j: m.version + 1 for j, m in models.items()}
