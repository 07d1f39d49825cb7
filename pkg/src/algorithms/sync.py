"""Synchronous SGD behind a barrier."""

import numpy as np

from src.algorithms.base import StepOutcome, TrainingAlgorithm
from src.calculations.model import check_finite
from src.config.constants import AlgorithmKind
from src.config.exceptions import InvariantBreach
from src.events.clock import TraceEntry


class SyncSgd(TrainingAlgorithm):
    """w^t = w^{t-1} - eta (1/n) sum_i grad f_i(w^{t-1}; xi_i^t); needs a lockstep trace."""

    kind = AlgorithmKind.SYNC_SGD

    def step(self, entry: TraceEntry) -> StepOutcome:
        if len(entry.contributors) != self.n:
            raise InvariantBreach("synchronous SGD needs every worker in every iteration", None, entry.t)
        models = self.collect(entry)
        total = np.zeros(self.obj.p)
        grads = []
        for j in self.ordered(entry):
            if models[j].version != entry.t - 1:
                raise InvariantBreach("synchronous step on a stale model", j, entry.t)
            grad = self.obj.stochastic_gradient(j, models[j], entry.t, self.streams)
            self.workers[j].G_tilde = grad
            total = total + grad.values
            grads.append(grad)
        g = total / self.n
        self.server.g_tilde = g
        new_values = self.server.w_tilde.values - self.eta * g
        check_finite(new_values, "model", iteration=entry.t)
        self.server.w_tilde = self.server.w_tilde.advanced(new_values)
        self.server.ledger.advance({j: m.version for j, m in models.items()})
        self.dispatch(entry)
        return StepOutcome(self.server, entry.time, entry.contributors, grads, 0.0)
