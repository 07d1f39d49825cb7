"""Dual-delay bookkeeping for model delays tau_i(t) and data delays d_i(t)."""

from typing import Dict, Iterable, Optional

import numpy as np

from src.config.exceptions import InvariantBreach


class DelayLedger:
    """
    Stores, per worker, the absolute version of the model and the absolute epoch of the
    sample behind its most recent gradient. Delays are derived on demand:

        tau_i(t) = t - model_version_i
        d_i(t)   = t - sample_epoch_i

    so no per-iteration increments can drift.
    """

    def __init__(self, n: int):
        assert n >= 1, "ledger needs at least one worker"
        self.n = n
        # Initialisation round: gradients at w^0 with samples xi^1, server at t=1.
        self.model_versions = np.zeros(n, dtype=np.int64)
        self.sample_epochs = np.ones(n, dtype=np.int64)
        self.t = 1
        self.tau_max_observed = 1
        self.verify()

    @property
    def tau(self) -> np.ndarray:
        return self.t - self.model_versions

    @property
    def d(self) -> np.ndarray:
        return self.t - self.sample_epochs

    def verify(self, contributors: Iterable[int] = (), fresh: bool = True) -> None:
        """Assert 1 <= tau_i <= t, tau_i >= d_i + 1 and d = 0 for fresh contributors."""
        tau, d = self.tau, self.d
        bad = np.flatnonzero(tau < d + 1)
        if bad.size:
            i = int(bad[0])
            raise InvariantBreach(f"model delay {tau[i]} < data delay {d[i]} + 1", i, self.t)
        bad = np.flatnonzero((tau < 1) | (tau > self.t) | (d < 0))
        if bad.size:
            i = int(bad[0])
            raise InvariantBreach(f"delays tau={tau[i]}, d={d[i]} outside [1, {self.t}] x [0, t)", i, self.t)
        if fresh:
            for j in contributors:
                if d[j] != 0:
                    raise InvariantBreach(f"contributor data delay {d[j]} != 0", j, self.t)

    def advance(
        self,
        contributors: Dict[int, int],
        sample_epochs: Optional[Dict[int, int]] = None,
    ) -> "DelayLedger":
        """
        Move to iteration t+1. `contributors` maps worker id -> version of the model its new
        gradient was computed on. Contributors' samples are fresh (epoch t+1) unless
        `sample_epochs` overrides them (synchronised-delay aggregation).
        """
        if len(contributors) == 0:
            raise InvariantBreach("empty contributor set", None, self.t + 1)
        self.t += 1
        for j, version in contributors.items():
            assert 0 <= j < self.n, f"unknown worker {j}"
            self.model_versions[j] = version
            self.sample_epochs[j] = self.t if sample_epochs is None else sample_epochs[j]
        self.verify(contributors.keys(), fresh=sample_epochs is None)
        self.tau_max_observed = max(self.tau_max_observed, int(self.tau.max()))
        return self

    def copy(self) -> "DelayLedger":
        other = DelayLedger.__new__(DelayLedger)
        other.n = self.n
        other.model_versions = self.model_versions.copy()
        other.sample_epochs = self.sample_epochs.copy()
        other.t = self.t
        other.tau_max_observed = self.tau_max_observed
        return other

    def __eq__(self, other) -> bool:
        if not isinstance(other, DelayLedger):
            return False
        return (
            self.t == other.t
            and np.array_equal(self.model_versions, other.model_versions)
            and np.array_equal(self.sample_epochs, other.sample_epochs)
        )

    def __repr__(self):
        return f"DelayLedger(t={self.t}, tau={self.tau.tolist()}, d={self.d.tolist()})"


def ledger_advance(
    ledger: DelayLedger,
    contributors: Dict[int, int],
    sample_epochs: Optional[Dict[int, int]] = None,
) -> DelayLedger:
    """Functional form of DelayLedger.advance, leaving the input ledger untouched."""
    return ledger.copy().advance(contributors, sample_epochs)
