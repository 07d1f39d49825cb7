"""Heterogeneous quadratic objectives with closed-form constants."""

from typing import List
from warnings import warn

import numpy as np

from src.objectives.objective import ALL_WORKERS, StochasticObjective, as_array

MAX_REGENERATE_ATTEMPTS = 5
CONDITION_LIMIT = 1e12


class QuadraticObjective(StochasticObjective):
    """
    F_i(w) = 1/2 w^T A_i w - b_i^T w with stochastic gradients A_i w - b_i + xi, where xi is
    isotropic Gaussian with E||xi||^2 = sigma^2 / batch_size exactly.
    """

    kind = "quadratic"

    def __init__(self, A: List[np.ndarray], b: List[np.ndarray], sigma: float, seed: int = 0, batch_size: int = 1):
        assert len(A) == len(b) and len(A) >= 1, "need one (A_i, b_i) pair per worker"
        p = A[0].shape[0]
        super().__init__(len(A), p, batch_size)
        assert sigma >= 0, "sigma must be non-negative"
        self.A = [np.array(a, dtype=np.float64) for a in A]
        self.b = [np.array(v, dtype=np.float64) for v in b]
        for a in self.A:
            assert a.shape == (p, p), "A_i must be p x p"
            assert np.allclose(a, a.T), "A_i must be symmetric"
            assert np.linalg.eigvalsh(a).min() > -1e-10, "A_i must be positive semidefinite"
        self.noise_sigma = float(sigma)
        self.seed = seed
        self.A_bar = sum(self.A) / self.n
        self.b_bar = sum(self.b) / self.n
        if np.linalg.cond(self.A_bar) > CONDITION_LIMIT:
            raise np.linalg.LinAlgError("average Hessian is singular")
        self.L = float(max(np.linalg.eigvalsh(a).max() for a in self.A))
        self.L_avg = float(np.linalg.eigvalsh(self.A_bar).max())
        self.w_star = np.linalg.solve(self.A_bar, self.b_bar)

    @property
    def sigma(self) -> float:
        return self.noise_sigma / np.sqrt(self.batch_size)

    @property
    def smoothness(self) -> float:
        return self.L_avg

    @property
    def optimal_value(self) -> float:
        return self.loss(self.w_star)

    def loss(self, w) -> float:
        values = as_array(w)
        return float(0.5 * values @ self.A_bar @ values - self.b_bar @ values)

    def full_gradient(self, i: int, w) -> np.ndarray:
        if i == ALL_WORKERS:
            return self.A_bar @ as_array(w) - self.b_bar
        return super().full_gradient(i, w)

    def local_loss(self, i: int, w: np.ndarray) -> float:
        return float(0.5 * w @ self.A[i] @ w - self.b[i] @ w)

    def local_gradient(self, i: int, w: np.ndarray) -> np.ndarray:
        return self.A[i] @ w - self.b[i]

    def sample_gradient(self, i: int, w: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        grad = self.local_gradient(i, w)
        if self.noise_sigma == 0:
            return grad
        # Mean of batch_size i.i.d. N(0, sigma^2/p I) draws, sampled directly.
        scale = self.noise_sigma / np.sqrt(self.p * self.batch_size)
        return grad + scale * rng.standard_normal(self.p)

    def sample_gradients(self, i: int, w, rng: np.random.Generator, M: int) -> np.ndarray:
        grad = self.local_gradient(i, as_array(w))
        if self.noise_sigma == 0:
            return np.tile(grad, (M, 1))
        scale = self.noise_sigma / np.sqrt(self.p * self.batch_size)
        return grad + scale * rng.standard_normal((M, self.p))

    def weighted_stationary_point(self, weights) -> np.ndarray:
        """Solve sum_i p_i grad F_i(w) = 0, the fixed point of frequency-biased ASGD."""
        weights = np.asarray(weights, dtype=np.float64)
        weights = weights / weights.sum()
        A_w = sum(p * a for p, a in zip(weights, self.A))
        b_w = sum(p * v for p, v in zip(weights, self.b))
        return np.linalg.solve(A_w, b_w)


def random_psd(rng: np.random.Generator, p: int) -> np.ndarray:
    """Random symmetric PSD matrix with O(1) spectrum."""
    M = rng.standard_normal((p, p))
    return M @ M.T / p


def make_quadratic(
    n: int,
    p: int,
    hetero: float,
    sigma: float,
    seed: int,
    batch_size: int = 1,
    min_eig: float = 0.5,
    max_eig: float = 1.0,
) -> QuadraticObjective:
    """
    A_i = A0 + hetero * S_i and b_i = b0 + hetero * u_i with a shared well-conditioned A0.
    hetero = 0 gives identical workers.
    """
    assert n >= 1 and p >= 1, "n, p must be >= 1"
    assert hetero >= 0 and sigma >= 0, "hetero and sigma must be non-negative"
    rng = np.random.default_rng(seed)
    Q, _ = np.linalg.qr(rng.standard_normal((p, p)))
    A0 = Q @ np.diag(np.linspace(min_eig, max_eig, p)) @ Q.T
    A0 = 0.5 * (A0 + A0.T)
    b0 = rng.standard_normal(p)
    S = [random_psd(rng, p) for _ in range(n)]
    u = [rng.standard_normal(p) for _ in range(n)]

    jitter = 0.0
    for attempt in range(MAX_REGENERATE_ATTEMPTS):
        A = [A0 + hetero * s + jitter * np.eye(p) for s in S]
        b = [b0 + hetero * v for v in u]
        try:
            return QuadraticObjective(A, b, sigma, seed=seed, batch_size=batch_size)
        except np.linalg.LinAlgError:
            jitter = 1e-6 * 10**attempt
            warn(f"Average Hessian singular for seed {seed}; regenerating with jitter {jitter:g}")
    raise RuntimeError(f"Could not build a non-singular quadratic after {MAX_REGENERATE_ATTEMPTS} attempts")
