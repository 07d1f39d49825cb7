import numpy as np

from src.objectives.logistic import LogisticObjective


def finite_difference(f, w: np.ndarray, h: float = 1e-6) -> np.ndarray:
    """Central differences of a scalar function."""
    grad = np.zeros_like(w)
    for k in range(w.size):
        e = np.zeros_like(w)
        e[k] = h
        grad[k] = (f(w + e) - f(w - e)) / (2 * h)
    return grad


def small_logistic(batch_size: int = 1, reg: float = 1e-2, seed: int = 0) -> LogisticObjective:
    """Two workers with 40 points each in R^3."""
    rng = np.random.default_rng(seed)
    datasets = []
    for _ in range(2):
        X = rng.standard_normal((40, 3))
        y = (rng.random(40) < 0.5).astype(float)
        datasets.append((X, y))
    return LogisticObjective(datasets, batch_size=batch_size, reg=reg)
