"""Dirichlet label-skew partitions."""

import numpy as np
import pytest

from src.objectives.partition import dirichlet_partition


@pytest.fixture
def labels():
    return np.random.default_rng(0).integers(0, 10, size=20_000)


def test_every_sample_assigned_once(labels):
    part = dirichlet_partition(labels, 5, 0.5, seed=1)
    assert part.assignment.shape == labels.shape
    assert set(np.unique(part.assignment)) <= set(range(5))
    assert part.counts().sum() == labels.size
    assert np.allclose(part.proportions.sum(axis=1), 1.0)


def test_large_alpha_near_uniform(labels):
    n = 10
    part = dirichlet_partition(labels, n, 1000.0, seed=0)
    assert np.mean(np.abs(part.proportions - 1.0 / n)) <= 0.1 / n
    shares = np.bincount(part.assignment, minlength=n) / labels.size
    assert np.all(np.abs(shares - 1.0 / n) <= 0.1 / n)


def test_small_alpha_concentrates(labels):
    part = dirichlet_partition(labels, 10, 0.1, seed=0)
    # most of each class lands on very few workers
    assert np.mean(part.proportions.max(axis=1)) > 0.35


def test_small_alpha_counts_track_proportions(labels):
    part = dirichlet_partition(labels, 10, 0.1, seed=2)
    counts = part.counts()
    m_k = counts.sum(axis=1, keepdims=True)
    p = part.proportions
    band = 5.0 * np.sqrt(p * (1.0 - p) / m_k) + 1.0 / m_k
    assert np.all(np.abs(counts / m_k - p) <= band)


def test_seeded(labels):
    a = dirichlet_partition(labels, 4, 0.3, seed=9)
    b = dirichlet_partition(labels, 4, 0.3, seed=9)
    assert np.array_equal(a.assignment, b.assignment)


def test_empty_worker_warning():
    with pytest.warns(UserWarning):
        part = dirichlet_partition(np.zeros(3, dtype=int), 50, 0.01, seed=0)
    assert part.empty_workers
    assert part.to_dict()["n"] == 50


def test_rejects_bad_alpha():
    with pytest.raises(AssertionError):
        dirichlet_partition([0, 1], 2, 0.0, seed=0)
