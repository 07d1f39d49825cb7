"""Monte Carlo checks of the gradient noise model."""

import numpy as np
import pytest

from src.calculations.model import ModelVector
from src.executables.verify import lemma_suite
from src.metrics.checks import lemma_variance_check, noise_samples, second_moment_check, unbiasedness_check
from src.objectives.quadratic import make_quadratic
from tests.objectives.objective_test_config import small_logistic


@pytest.fixture
def quad():
    return make_quadratic(n=4, p=8, hetero=1.0, sigma=1.0, seed=0)


def stale_models(obj):
    rng = np.random.default_rng(5)
    return [ModelVector(rng.standard_normal(obj.p), version=k) for k in range(obj.n)]


def test_aggregated_noise_variance(quad):
    result = lemma_variance_check(quad, stale_models(quad), 20_000)
    assert result.passed
    assert result.bound == pytest.approx(0.25)
    assert 0.97 <= result.estimate / result.bound <= 1.03


def test_lemma_needs_enough_samples(quad):
    with pytest.raises(AssertionError):
        lemma_variance_check(quad, stale_models(quad), 100)


def test_unbiased_and_bounded(quad):
    w = np.ones(quad.p)
    estimate, band, passed = unbiasedness_check(quad, w, 1, 20_000)
    assert passed and estimate <= band
    moment = second_moment_check(quad, w, 1, 20_000)
    assert moment.passed
    assert moment.to_dict()["worker"] == 1


def test_noise_checks_need_known_sigma():
    obj = small_logistic()
    with pytest.raises(AssertionError):
        noise_samples(obj, 0, np.zeros(3), 10, np.random.default_rng(0))


def test_lemma_suite_small():
    result = lemma_suite(M=20_000, n=4, p=8)
    assert result["suite"] == "lemma"
    assert result["passed"], result["checks"]
