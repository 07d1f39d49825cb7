"""Wait-free ASGD variants: one fresh-sample gradient per server iteration, no aggregation."""

from src.algorithms.base import StepOutcome, TrainingAlgorithm
from src.calculations.model import check_finite
from src.config.constants import AlgorithmKind, DispatchPolicy
from src.config.exceptions import InvariantBreach
from src.events.clock import TraceEntry


class VanillaAsgd(TrainingAlgorithm):
    """w^t = w^{t-1} - eta grad f_j(w^{t - tau_j(t)}; xi_j^t); the new model goes back to j."""

    kind = AlgorithmKind.VANILLA_ASGD
    dispatch_policy = DispatchPolicy.RETURN

    def step(self, entry: TraceEntry) -> StepOutcome:
        if len(entry.contributors) != 1:
            raise InvariantBreach("wait-free ASGD consumes exactly one gradient per iteration", None, entry.t)
        models = self.collect(entry)
        (j, model), = models.items()
        grad = self.obj.stochastic_gradient(j, model, entry.t, self.streams)
        if grad.sample_epoch != entry.t:
            raise InvariantBreach("stale sample consumed by wait-free ASGD", j, entry.t)
        self.workers[j].G_tilde = grad
        self.server.g_tilde = grad.values
        new_values = self.server.w_tilde.values - self.eta * grad.values
        check_finite(new_values, "model", iteration=entry.t)
        self.server.w_tilde = self.server.w_tilde.advanced(new_values)
        self.server.ledger.advance({j: model.version})
        self.dispatch(entry)
        return StepOutcome(self.server, entry.time, entry.contributors, [grad], 0.0)


class UniformAsgd(VanillaAsgd):
    """Same update; each new model is sent to a worker drawn uniformly at random (FIFO backlog)."""

    kind = AlgorithmKind.UNIFORM_ASGD
    dispatch_policy = DispatchPolicy.UNIFORM


class ShuffledAsgd(VanillaAsgd):
    """Same update; dispatch walks a random permutation of the workers, reshuffled every period."""

    kind = AlgorithmKind.SHUFFLED_ASGD
    dispatch_policy = DispatchPolicy.SHUFFLED
