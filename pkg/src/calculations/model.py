"""Parameter vectors and stamped stochastic gradients."""

import numpy as np

from src.config.exceptions import DimensionMismatch, NumericalBlowUp


def check_finite(values: np.ndarray, what: str, iteration: int = None) -> None:
    """Abort with a diagnostic if any entry is NaN/Inf."""
    if not np.all(np.isfinite(values)):
        raise NumericalBlowUp(f"non-finite entries in {what}", iteration=iteration)


class ModelVector:
    """Dense model w in R^p stamped with the server iteration that produced it."""

    def __init__(self, values, version: int = 0):
        values = np.array(values, dtype=np.float64)
        assert values.ndim == 1, "model must be a flat vector"
        assert version >= 0, "model version must be non-negative"
        check_finite(values, "model", iteration=version)
        values.setflags(write=False)
        self._values = values
        self.version = int(version)

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def dim(self) -> int:
        return self._values.shape[0]

    def advanced(self, new_values: np.ndarray) -> "ModelVector":
        """Return the successor model (version + 1) with the same dimension."""
        if new_values.shape != self._values.shape:
            raise DimensionMismatch(f"model dimension changed from {self.dim} to {new_values.shape}")
        return ModelVector(new_values, self.version + 1)

    def __repr__(self):
        return f"ModelVector(version={self.version}, dim={self.dim})"


class GradientRecord:
    """
    Stochastic gradient stamped with the model version it was evaluated at and the
    server iteration whose sample stream produced its data.
    """

    def __init__(self, values, model_version: int, sample_epoch: int, worker_id: int):
        values = np.array(values, dtype=np.float64)
        assert model_version >= 0, "model_version must be >= 0"
        assert sample_epoch >= 1, "sample_epoch must be >= 1"
        check_finite(values, f"gradient of worker {worker_id}", iteration=sample_epoch)
        values.setflags(write=False)
        self._values = values
        self.model_version = int(model_version)
        self.sample_epoch = int(sample_epoch)
        self.worker_id = int(worker_id)

    @property
    def values(self) -> np.ndarray:
        return self._values

    def __repr__(self):
        return (
            f"GradientRecord(worker={self.worker_id}, model_version={self.model_version}, "
            f"sample_epoch={self.sample_epoch})"
        )
