"""Regularised logistic regression over Dirichlet-partitioned synthetic data."""

from typing import List, Tuple
from warnings import warn

import numpy as np

from src.objectives.objective import StochasticObjective
from src.objectives.partition import DirichletPartition, dirichlet_partition


def sigmoid(z: np.ndarray) -> np.ndarray:
    return 0.5 * (1.0 + np.tanh(0.5 * z))


class LogisticObjective(StochasticObjective):
    """
    F_i(w) = mean_j [log(1 + exp(x_j^T w)) - y_j x_j^T w] + reg/2 ||w||^2 over worker i's shard.
    Mini-batches draw batch_size indices uniformly with replacement, so they are unbiased for F_i.
    """

    kind = "logistic"

    def __init__(self, datasets: List[Tuple[np.ndarray, np.ndarray]], batch_size: int = 1, reg: float = 0.0):
        assert len(datasets) >= 1, "need at least one worker dataset"
        p = datasets[0][0].shape[1]
        super().__init__(len(datasets), p, batch_size)
        assert reg >= 0, "regulariser must be non-negative"
        self.reg = float(reg)
        self.features = []
        self.labels = []
        for X, y in datasets:
            X = np.asarray(X, dtype=np.float64).reshape(-1, p)
            y = np.asarray(y, dtype=np.float64)
            assert X.shape[0] == y.shape[0], "features and labels differ in length"
            assert np.all((y == 0) | (y == 1)), "labels must be in {0, 1}"
            self.features.append(X)
            self.labels.append(y)
        empty = [i for i, y in enumerate(self.labels) if y.size == 0]
        if empty:
            warn(f"Workers {empty} hold no data; their local loss is the regulariser only")

    @property
    def smoothness(self) -> float:
        """max_i lambda_max(X_i^T X_i / m_i) / 4 + reg, an upper bound for every F_i and F."""
        bound = 0.0
        for X in self.features:
            if X.shape[0]:
                bound = max(bound, float(np.linalg.eigvalsh(X.T @ X / X.shape[0]).max()) / 4.0)
        return bound + self.reg

    def local_loss(self, i: int, w: np.ndarray) -> float:
        X, y = self.features[i], self.labels[i]
        reg_term = 0.5 * self.reg * float(w @ w)
        if y.size == 0:
            return reg_term
        z = X @ w
        return float(np.mean(np.logaddexp(0.0, z) - y * z)) + reg_term

    def local_gradient(self, i: int, w: np.ndarray) -> np.ndarray:
        X, y = self.features[i], self.labels[i]
        if y.size == 0:
            return self.reg * w
        return X.T @ (sigmoid(X @ w) - y) / y.size + self.reg * w

    def sample_gradient(self, i: int, w: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        X, y = self.features[i], self.labels[i]
        if y.size == 0:
            return self.reg * w
        idx = rng.integers(0, y.size, size=self.batch_size)
        Xb, yb = X[idx], y[idx]
        return Xb.T @ (sigmoid(Xb @ w) - yb) / self.batch_size + self.reg * w


def make_logistic(
    n: int,
    p: int,
    samples: int,
    num_classes: int,
    alpha: float,
    seed: int,
    batch_size: int = 1,
    reg: float = 1e-3,
) -> Tuple[LogisticObjective, DirichletPartition]:
    """
    Gaussian clusters (one per class) with labels from a planted logistic model; clusters are
    split across workers by `dirichlet_partition`, so small alpha gives label-skewed shards.
    """
    rng = np.random.default_rng(seed)
    centers = 2.0 * rng.standard_normal((num_classes, p))
    classes = rng.integers(0, num_classes, size=samples)
    X = centers[classes] + rng.standard_normal((samples, p))
    w_true = rng.standard_normal(p)
    y = (rng.random(samples) < sigmoid(X @ w_true)).astype(np.float64)
    partition = dirichlet_partition(classes, n, alpha, seed + 1)
    datasets = [(X[partition.shard(i)], y[partition.shard(i)]) for i in range(n)]
    return LogisticObjective(datasets, batch_size=batch_size, reg=reg), partition
