from typing import List, Optional

import numpy as np

from src.algorithms.base import TrainingAlgorithm
from src.algorithms.registry import make_algorithm
from src.algorithms.stepsize import theorem1_bound, theorem1_stepsize
from src.calculations.model import ModelVector
from src.config.constants import AlgorithmKind, StepsizeRule
from src.config.exceptions import ConfigError
from src.config.output_filenames import OutputFiles
from src.config.run_config import RunConfig
from src.events.clock import Trace, observed_delays, schedule_run
from src.events.events import init_event, update_event
from src.objectives.logistic import make_logistic
from src.objectives.objective import StochasticObjective
from src.objectives.quadratic import make_quadratic
from src.objectives.sampling import OUTPUT_SALT, SampleStreams, keyed_rng
from src.state.books import RunBook


def build_objective(config: RunConfig) -> StochasticObjective:
    """Objective from the [objective] section; its seed is fixed across run seeds."""
    o, r = config.objective, config.run
    batch_size = config.algorithm["batch_size"]
    if o["kind"] == "quadratic":
        return make_quadratic(r["n"], r["p"], o["hetero"], o["sigma"], o["seed"], batch_size=batch_size)
    obj, _ = make_logistic(
        r["n"],
        r["p"],
        samples=o["samples"],
        num_classes=o["num_classes"],
        alpha=o["alpha"],
        seed=o["seed"],
        batch_size=batch_size,
        reg=o["reg"],
    )
    return obj


class SimulationState:
    """
    Owns everything shared by the seeds of one configured run: the objective, the speed model
    and the output filenames. Each call to run_seed builds its own trace, sample streams and
    algorithm state, so seeds never share mutable state.
    """

    def __init__(self, config: RunConfig, objective: Optional[StochasticObjective] = None, verbose: bool = None):
        self.config = config
        self.verbose = config.run["verbose"] if verbose is None else verbose
        self.n = config.run["n"]
        self.T = config.run["T"]
        self.objective = build_objective(config) if objective is None else objective
        if self.objective.n != self.n:
            raise ConfigError(f"objective has {self.objective.n} workers but the config asks for {self.n}")
        self.speed_model = config.speed_model()
        self.mode = config.async_mode
        self.dispatch = config.dispatch_policy
        self.params = config.algorithm_parameters()
        self.algorithm_name = config.algorithm_kind.value
        self._output_files = None

    @property
    def output_files(self) -> OutputFiles:
        """Created lazily so in-memory runs touch no directories."""
        if self._output_files is None:
            self._output_files = OutputFiles(self.config)
        return self._output_files

    def initial_model(self) -> ModelVector:
        return ModelVector(np.zeros(self.objective.p), version=0)

    def build_trace(self, seed: int) -> Trace:
        """Iterations t = 2..T; the dispatch rng is keyed by the run seed."""
        if self.T == 1:
            return Trace(self.speed_model, self.mode, self.dispatch, [])
        return schedule_run(
            self.speed_model,
            self.mode,
            self.T - 1,
            dispatch=self.dispatch,
            seed=seed,
            shuffle_period=self.params.shuffle_period,
            latency=self.config.mode["latency"],
        )

    def theorem1_constants(self, trace: Trace) -> dict:
        """(n, Delta, L, sigma, tau_max, T) with [stepsize] overrides taking precedence."""
        st = self.config.stepsize
        w0 = self.initial_model()
        delta = st["delta"] or self.objective.optimality_gap(w0)
        if delta is None:
            # logistic losses are non-negative, so F(w0) bounds F(w0) - F*
            delta = self.objective.loss(w0)
        L = st["L"] or self.objective.smoothness
        sigma = st["sigma"] or self.objective.sigma
        if sigma is None:
            raise ConfigError("objective has no closed-form sigma; set [stepsize] sigma")
        tau_max = st["tau_max"] or observed_delays(trace)[0]
        return {"n": self.n, "Delta": float(delta), "L": float(L), "sigma": float(sigma), "tau_max": int(tau_max), "T": self.T}

    def resolve_stepsize(self, trace: Trace) -> float:
        rule = self.config.stepsize_rule
        if rule == StepsizeRule.THEOREM1:
            try:
                return theorem1_stepsize(**self.theorem1_constants(trace))
            except ValueError as err:
                raise ConfigError(str(err)) from err
        return self.config.stepsize["eta"]

    def candidate_stepsizes(self) -> List[float]:
        if self.config.stepsize_rule == StepsizeRule.GRID:
            return list(self.config.stepsize["grid"])
        return [None]

    def make_algorithm(self, streams: SampleStreams, eta: float, **kwargs) -> TrainingAlgorithm:
        return make_algorithm(self.objective, self.params, streams, eta, speeds=self.speed_model.speeds, **kwargs)

    def run_seed(self, seed: int, eta: float = None, trace: Trace = None, **algorithm_kwargs) -> RunBook:
        """Execute one run of length T and return its records and summary."""
        trace = self.build_trace(seed) if trace is None else trace
        eta = self.resolve_stepsize(trace) if eta is None else eta
        streams = SampleStreams(seed)
        algorithm = self.make_algorithm(streams, eta, **algorithm_kwargs)
        book = RunBook(seed, self.algorithm_name, eta)

        w0 = self.initial_model()
        server, _ = algorithm.initialize(w0)
        init_event(book, self.objective, w0, server.w_tilde)
        w_prev = server.w_tilde
        for entry in trace:
            outcome = algorithm.step(entry)
            update_event(book, self.objective, w_prev, outcome, entry)
            w_prev = outcome.server.w_tilde

        book.summary = self.summarize(book, trace)
        self.algorithm = algorithm
        return book

    def summarize(self, book: RunBook, trace: Trace) -> dict:
        """Final loss, stationarity, observed delays and participation; no wall time."""
        grad_norms = book.grad_norms()
        tau = np.array([r.tau for r in book.records])
        w_out_index = int(keyed_rng(book.seed, OUTPUT_SALT).integers(1, len(book) + 1))
        summary = {
            "algorithm": book.algorithm,
            "seed": book.seed,
            "eta": book.eta,
            "T": len(book),
            "final_loss": float(book.records[-1].loss),
            "avg_grad_norm_sq": float(grad_norms.mean()),
            "tau_max": int(tau.max()),
            "tau_avg": float(tau.mean()),
            "participation": trace.participation().tolist() if len(trace) else [1.0 / self.n] * self.n,
            "max_queue_depth": trace.max_queue_depth().tolist(),
            "w_out_index": w_out_index,
            "w_out_grad_norm_sq": float(grad_norms[w_out_index - 1]),
        }
        if self.objective.optimal_value is not None:
            summary["final_gap"] = float(book.records[-1].loss - self.objective.optimal_value)
        if self.config.stepsize_rule == StepsizeRule.THEOREM1 and self.config.algorithm_kind == AlgorithmKind.DUDE_ASGD:
            summary["theorem1_bound"] = theorem1_bound(**self.theorem1_constants(trace))
        return summary
