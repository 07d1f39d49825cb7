"""Monte Carlo checks of the noise assumptions behind the convergence analysis."""

from typing import Sequence

import numpy as np

from src.objectives.objective import StochasticObjective
from src.objectives.sampling import PROBE_SALT, keyed_rng

MIN_LEMMA_SAMPLES = 10_000


class CheckResult:
    """estimate vs bound, pass flag and the Monte Carlo size."""

    def __init__(self, name: str, estimate: float, bound: float, passed: bool, M: int, **extra):
        self.name = name
        self.estimate = float(estimate)
        self.bound = float(bound)
        self.passed = bool(passed)
        self.M = int(M)
        self.extra = extra

    def details(self) -> dict:
        """Everything except the name and the pass flag."""
        out = {"estimate": self.estimate, "bound": self.bound, "M": self.M}
        out.update(self.extra)
        return out

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, **self.details()}

    def __iter__(self):
        return iter((self.estimate, self.bound, self.passed))

    def __repr__(self):
        return f"CheckResult({self.name}, estimate={self.estimate:.4e}, bound={self.bound:.4e}, passed={self.passed})"


def noise_samples(obj: StochasticObjective, i: int, w, M: int, rng: np.random.Generator) -> np.ndarray:
    """M draws of grad f_i(w; xi) - grad F_i(w)."""
    assert obj.sigma is not None, "noise checks need an objective with a known sigma"
    return obj.sample_gradients(i, w, rng, M) - obj.full_gradient(i, w)


def lemma_variance_check(obj: StochasticObjective, models: Sequence, M: int, seed: int = 0) -> CheckResult:
    """
    Estimate E||(1/n) sum_i (grad f_i(w_i; xi_i) - grad F_i(w_i))||^2 with each worker at its own
    (stale) model and independent fresh samples. Passes iff estimate <= sigma^2/n (1 + 5/sqrt(M)).
    """
    assert len(models) == obj.n, "need one delayed model per worker"
    assert M >= MIN_LEMMA_SAMPLES, f"need at least {MIN_LEMMA_SAMPLES} Monte Carlo samples"
    total = np.zeros((M, obj.p))
    for i, w in enumerate(models):
        total += noise_samples(obj, i, w, M, keyed_rng(seed, PROBE_SALT, i))
    total /= obj.n
    estimate = float(np.mean(np.sum(total * total, axis=1)))
    bound = obj.sigma**2 / obj.n
    passed = estimate <= bound * (1.0 + 5.0 / np.sqrt(M))
    return CheckResult("lemma_variance", estimate, bound, passed, M)


def unbiasedness_check(obj: StochasticObjective, w, i: int, M: int, seed: int = 0) -> CheckResult:
    """||mean of M stochastic gradients - grad F_i(w)|| against the 5 sigma / sqrt(M) band."""
    noise = noise_samples(obj, i, w, M, keyed_rng(seed, PROBE_SALT, obj.n + i))
    deviation = float(np.linalg.norm(noise.mean(axis=0)))
    band = 5.0 * obj.sigma / np.sqrt(M)
    return CheckResult("unbiasedness", deviation, band, deviation <= band, M, worker=i)


def second_moment_check(obj: StochasticObjective, w, i: int, M: int, seed: int = 0) -> CheckResult:
    """E||grad f_i - grad F_i||^2 <= sigma^2, with a 5-sigma Monte Carlo allowance."""
    noise = noise_samples(obj, i, w, M, keyed_rng(seed, PROBE_SALT, 2 * obj.n + i))
    sq = np.sum(noise * noise, axis=1)
    estimate = float(sq.mean())
    allowance = 5.0 * float(sq.std()) / np.sqrt(M)
    bound = obj.sigma**2
    return CheckResult("second_moment", estimate, bound, estimate <= bound + allowance, M, worker=i)
