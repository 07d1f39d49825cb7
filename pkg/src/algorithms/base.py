"""Common step interface shared by every training algorithm."""

from abc import ABC, abstractmethod
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.calculations.buffers import ServerState, WorkerState, aggregate_buffers
from src.calculations.ledger import DelayLedger
from src.calculations.model import GradientRecord, ModelVector
from src.config.algorithm_params import AlgorithmParameters
from src.config.constants import AlgorithmKind
from src.config.exceptions import InvariantBreach
from src.events.clock import TraceEntry
from src.objectives.objective import StochasticObjective
from src.objectives.sampling import SampleStreams


class StepOutcome:
    """Result of exactly one server iteration."""

    def __init__(
        self,
        server: ServerState,
        time: float,
        contributors: Sequence[int],
        gradients: List[GradientRecord],
        delta_norm: float,
    ):
        self.server = server
        self.t = server.t
        self.time = time
        self.contributors = tuple(contributors)
        self.gradients = gradients
        self.delta_norm = float(delta_norm)
        self.g_norm = float(np.linalg.norm(server.g_tilde))

    def __repr__(self):
        return f"StepOutcome(t={self.t}, contributors={self.contributors}, g_norm={self.g_norm:.3e})"


class TrainingAlgorithm(ABC):
    """
    State machine over (ServerState, WorkerState[]). `initialize` runs the t = 1 round in which
    every worker evaluates w^0 with sample xi_i^1; `step` consumes one TraceEntry.
    """

    kind: AlgorithmKind = None

    def __init__(
        self,
        obj: StochasticObjective,
        params: AlgorithmParameters,
        streams: SampleStreams,
        eta: float,
        speeds: Optional[Sequence[float]] = None,
    ):
        assert eta > 0, "stepsize must be positive"
        self.obj = obj
        self.params = params
        self.streams = streams
        self.eta = float(eta)
        self.n = obj.n
        self.speeds = np.ones(self.n) if speeds is None else np.asarray(speeds, dtype=np.float64)
        self.server: ServerState = None
        self.workers: List[WorkerState] = []

    # ---- initialisation -------------------------------------------------------------
    def initial_gradients(self, w0: ModelVector) -> List[GradientRecord]:
        return [self.obj.stochastic_gradient(i, w0, 1, self.streams) for i in range(self.n)]

    def initialize(self, w0: ModelVector) -> Tuple[ServerState, List[WorkerState]]:
        """g^1 = (1/n) sum_i grad f_i(w^0; xi_i^1), w^1 = w^0 - eta g^1, broadcast w^1."""
        assert w0.version == 0, "initial model must carry version 0"
        grads = self.initial_gradients(w0)
        self.workers = [WorkerState(i, self.speeds[i], grads[i], None) for i in range(self.n)]
        g1 = aggregate_buffers(self.workers)
        self.server = ServerState(w0, g1, DelayLedger(self.n))
        self.server.w_tilde = w0.advanced(w0.values - self.eta * g1)
        for worker in self.workers:
            worker.receive(self.server.w_tilde, 0.0)
        return self.server, self.workers

    # ---- helpers shared by the steps ------------------------------------------------
    def collect(self, entry: TraceEntry) -> Dict[int, ModelVector]:
        """Pop the model each contributor computed on and check it against the trace."""
        if entry.t != self.server.t + 1:
            raise InvariantBreach(f"trace iteration {entry.t} does not follow server iteration", None, self.server.t)
        models = {}
        for j, version in zip(entry.contributors, entry.model_versions):
            model = self.workers[j].finish()
            if model.version != version:
                raise InvariantBreach(
                    f"worker computed on model {model.version} but the trace says {version}", j, entry.t
                )
            models[j] = model
        return models

    def dispatch(self, entry: TraceEntry) -> None:
        for k in entry.dispatched_to:
            self.workers[k].receive(self.server.w_tilde, entry.time)

    def ordered(self, entry: TraceEntry) -> List[int]:
        return sorted(entry.contributors)

    @abstractmethod
    def step(self, entry: TraceEntry) -> StepOutcome:
        """Advance the server by one iteration."""
