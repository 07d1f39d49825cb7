"""Abstract stochastic objective F(w) = (1/n) sum_i F_i(w)."""

from abc import ABC, abstractmethod
from typing import Optional, Union

import numpy as np

from src.calculations.model import GradientRecord, ModelVector, check_finite
from src.objectives.sampling import SampleStreams

ALL_WORKERS = -1


def as_array(w: Union[ModelVector, np.ndarray]) -> np.ndarray:
    """Accept either a stamped model or a raw vector."""
    values = w.values if isinstance(w, ModelVector) else np.asarray(w, dtype=np.float64)
    check_finite(values, "objective input")
    return values


class StochasticObjective(ABC):
    """Per-worker losses with exact and stochastic first-order oracles."""

    kind = "abstract"

    def __init__(self, n: int, p: int, batch_size: int = 1):
        assert n >= 1 and p >= 1, "need at least one worker and one coordinate"
        assert batch_size >= 1, "batch size must be >= 1"
        self.n = n
        self.p = p
        self.batch_size = batch_size

    @abstractmethod
    def local_loss(self, i: int, w: np.ndarray) -> float:
        """F_i(w)."""

    @abstractmethod
    def local_gradient(self, i: int, w: np.ndarray) -> np.ndarray:
        """Exact grad F_i(w)."""

    @abstractmethod
    def sample_gradient(self, i: int, w: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """One mini-batch stochastic gradient of F_i at w drawn from `rng`."""

    @property
    def sigma(self) -> Optional[float]:
        """Noise bound: E||grad f_i - grad F_i||^2 <= sigma^2 for one mini-batch gradient, if known."""
        return None

    @property
    def smoothness(self) -> Optional[float]:
        """Smoothness constant of F, if known."""
        return None

    @property
    def optimal_value(self) -> Optional[float]:
        """F* if known."""
        return None

    def loss(self, w) -> float:
        values = as_array(w)
        return float(sum(self.local_loss(i, values) for i in range(self.n)) / self.n)

    def full_gradient(self, i: int, w) -> np.ndarray:
        """Exact grad F_i(w), or grad F(w) when i is ALL_WORKERS."""
        values = as_array(w)
        if i == ALL_WORKERS:
            total = np.zeros(self.p)
            for j in range(self.n):
                total = total + self.local_gradient(j, values)
            return total / self.n
        assert 0 <= i < self.n, f"unknown worker {i}"
        return self.local_gradient(i, values)

    def stochastic_gradient(
        self,
        i: int,
        w: ModelVector,
        epoch: int,
        streams: SampleStreams,
        substep: int = 0,
    ) -> GradientRecord:
        """grad f_i(w; xi_i^epoch) from the dedicated (i, epoch) stream."""
        rng = streams.stream(i, epoch, substep)
        values = self.sample_gradient(i, as_array(w), rng)
        version = w.version if isinstance(w, ModelVector) else 0
        return GradientRecord(values, model_version=version, sample_epoch=epoch, worker_id=i)

    def sample_gradients(self, i: int, w, rng: np.random.Generator, M: int) -> np.ndarray:
        """M independent stochastic gradients of F_i at a fixed w from one generator (Monte Carlo use)."""
        values = as_array(w)
        return np.stack([self.sample_gradient(i, values, rng) for _ in range(M)])

    def optimality_gap(self, w) -> Optional[float]:
        """F(w) - F*, used as Delta in the theorem1 stepsize."""
        if self.optimal_value is None:
            return None
        return self.loss(w) - self.optimal_value

    def grad_norm_sq(self, w) -> float:
        g = self.full_gradient(ALL_WORKERS, w)
        return float(g @ g)
