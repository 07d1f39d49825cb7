"""Counter-based random streams keyed by (worker, epoch)."""

from typing import Set, Tuple

import numpy as np

from src.config.exceptions import SampleReuseError

# Stream families; keeps sample draws, dispatch decisions and Monte Carlo probes independent.
SAMPLE_SALT = 0
DISPATCH_SALT = 1
SPEED_SALT = 2
PROBE_SALT = 3
OUTPUT_SALT = 4
LABEL_SALT = 5
STALE_MODEL_SALT = 6


def keyed_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for an integer key; identical keys give identical streams."""
    return np.random.default_rng([int(seed)] + [int(k) for k in key])


class SampleStreams:
    """
    Hands out one generator per (worker, epoch, substep). The sample behind xi_i^t is therefore
    fixed by (seed, i, t) no matter which asynchronous schedule requested it, and a second
    request for the same key is refused.
    """

    def __init__(self, seed: int, check_reuse: bool = True):
        self.seed = int(seed)
        self.check_reuse = check_reuse
        self._consumed: Set[Tuple[int, int, int]] = set()

    def stream(self, worker_id: int, epoch: int, substep: int = 0) -> np.random.Generator:
        """Return the dedicated generator for sample xi_{worker}^{epoch} (local step `substep`)."""
        key = (int(worker_id), int(epoch), int(substep))
        if self.check_reuse:
            if key in self._consumed:
                raise SampleReuseError(
                    f"sample stream (worker={worker_id}, epoch={epoch}, substep={substep}) already consumed"
                )
            self._consumed.add(key)
        return keyed_rng(self.seed, SAMPLE_SALT, *key)

    def consumed(self, worker_id: int, epoch: int, substep: int = 0) -> bool:
        return (int(worker_id), int(epoch), int(substep)) in self._consumed

    def __len__(self):
        return len(self._consumed)
