"""Probe-set estimates of the bounded-heterogeneity constants zeta_i."""

from typing import List

import numpy as np

from src.objectives.objective import ALL_WORKERS, StochasticObjective
from src.objectives.sampling import PROBE_SALT, keyed_rng

NUM_RANDOM_PROBES = 8


class HeterogeneityReport:
    """
    zeta_i^2 is the largest ||grad F_i(w) - grad F(w)||^2 over the probe points. This is a lower
    estimate of the uniform bound, which is infinite for quadratics with distinct Hessians.
    """

    def __init__(self, per_worker: np.ndarray):
        self.per_worker = np.asarray(per_worker, dtype=np.float64)
        self.zeta_sq = float(self.per_worker.mean())
        self.zeta_max = float(np.sqrt(self.per_worker.max()))

    def to_dict(self) -> dict:
        return {
            "zeta_sq": self.zeta_sq,
            "zeta_max": self.zeta_max,
            "per_worker": self.per_worker.tolist(),
            "estimate": "probe-set lower bound",
        }


def heterogeneity_report(obj: StochasticObjective, probe_points: List) -> HeterogeneityReport:
    """Per-worker max over probes of ||grad F_i(w) - grad F(w)||^2."""
    assert len(probe_points) >= 1, "need at least one probe point"
    per_worker = np.zeros(obj.n)
    for w in probe_points:
        global_grad = obj.full_gradient(ALL_WORKERS, w)
        for i in range(obj.n):
            diff = obj.full_gradient(i, w) - global_grad
            per_worker[i] = max(per_worker[i], float(diff @ diff))
    return HeterogeneityReport(per_worker)


def default_probe_points(obj: StochasticObjective, w0, seed: int, scale: float = 1.0) -> list:
    """{w0, w* (when known), 8 seeded Gaussian points}."""
    rng = keyed_rng(seed, PROBE_SALT)
    probes = [np.asarray(getattr(w0, "values", w0), dtype=np.float64)]
    w_star = getattr(obj, "w_star", None)
    if w_star is not None:
        probes.append(w_star)
    probes.extend(scale * rng.standard_normal(obj.p) for _ in range(NUM_RANDOM_PROBES))
    return probes
