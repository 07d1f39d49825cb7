"""Label-skewed data allocation with a symmetric Dirichlet prior per class."""

from warnings import warn

import numpy as np


class DirichletPartition:
    """Result of a Dirichlet split: per-sample worker ids plus the recorded class proportions."""

    def __init__(self, assignment: np.ndarray, proportions: np.ndarray, labels: np.ndarray):
        self.assignment = assignment
        # proportions[k, i] = probability that a class-k instance goes to worker i
        self.proportions = proportions
        self.labels = labels
        self.n = proportions.shape[1]

    def shard(self, worker_id: int) -> np.ndarray:
        """Indices of the samples held by `worker_id`."""
        return np.flatnonzero(self.assignment == worker_id)

    def counts(self) -> np.ndarray:
        """counts[k, i] = number of class-k samples on worker i."""
        K = self.proportions.shape[0]
        table = np.zeros((K, self.n), dtype=np.int64)
        np.add.at(table, (self.labels, self.assignment), 1)
        return table

    @property
    def empty_workers(self) -> list:
        sizes = np.bincount(self.assignment, minlength=self.n)
        return [i for i in range(self.n) if sizes[i] == 0]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "assignment": self.assignment.tolist(),
            "proportions": self.proportions.tolist(),
            "empty_workers": self.empty_workers,
        }


def dirichlet_partition(labels, n: int, alpha: float, seed: int) -> DirichletPartition:
    """
    For each class k draw p_k ~ Dir_n(alpha) (normalised Gamma draws) and send every class-k
    instance to worker i independently with probability p_{k,i}.
    """
    assert alpha > 0, "Dirichlet concentration must be positive"
    assert n >= 1, "need at least one worker"
    labels = np.asarray(labels, dtype=np.int64)
    assert labels.ndim == 1 and labels.size > 0, "labels must be a non-empty vector"
    assert labels.min() >= 0, "labels must be in [0, K)"
    K = int(labels.max()) + 1
    rng = np.random.default_rng(seed)

    proportions = np.zeros((K, n))
    assignment = np.zeros(labels.size, dtype=np.int64)
    for k in range(K):
        gammas = rng.gamma(alpha, 1.0, size=n)
        if gammas.sum() == 0:
            # every Gamma underflowed (tiny alpha); the mass goes to one worker
            gammas[rng.integers(n)] = 1.0
        proportions[k] = gammas / gammas.sum()
        members = np.flatnonzero(labels == k)
        if members.size:
            assignment[members] = rng.choice(n, size=members.size, p=proportions[k])

    partition = DirichletPartition(assignment, proportions, labels)
    if partition.empty_workers:
        warn(f"Dirichlet split (alpha={alpha}) left workers {partition.empty_workers} without samples")
    return partition
