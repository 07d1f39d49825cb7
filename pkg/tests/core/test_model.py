"""Model vectors and gradient records."""

import numpy as np
import pytest

from src.calculations.model import GradientRecord, ModelVector
from src.config.exceptions import DimensionMismatch, NumericalBlowUp


def test_advanced_increments_version():
    w = ModelVector([1.0, 2.0], version=3)
    nxt = w.advanced(np.array([0.0, 0.0]))
    assert nxt.version == 4
    assert w.values.tolist() == [1.0, 2.0]


def test_values_read_only():
    w = ModelVector([1.0])
    with pytest.raises(ValueError):
        w.values[0] = 2.0


def test_dimension_fixed():
    with pytest.raises(DimensionMismatch):
        ModelVector([1.0, 2.0]).advanced(np.zeros(3))


@pytest.mark.parametrize("bad", [np.nan, np.inf, -np.inf])
def test_non_finite_model_rejected(bad):
    with pytest.raises(NumericalBlowUp):
        ModelVector([0.0, bad], version=5)


def test_gradient_stamps():
    g = GradientRecord([1.0], model_version=0, sample_epoch=1, worker_id=2)
    assert (g.model_version, g.sample_epoch, g.worker_id) == (0, 1, 2)
    with pytest.raises(AssertionError):
        GradientRecord([1.0], model_version=0, sample_epoch=0, worker_id=0)
    with pytest.raises(NumericalBlowUp):
        GradientRecord([np.nan], model_version=0, sample_epoch=1, worker_id=0)
