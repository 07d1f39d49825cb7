"""Dual-delay ledger bookkeeping."""

import numpy as np
import pytest

from src.calculations.ledger import DelayLedger, ledger_advance
from src.config.exceptions import InvariantBreach


def test_initial_state():
    "All workers contributed at t = 1 on w^0 with fresh samples."
    ledger = DelayLedger(4)
    assert ledger.t == 1
    assert ledger.tau.tolist() == [1, 1, 1, 1]
    assert ledger.d.tolist() == [0, 0, 0, 0]
    assert ledger.tau_max_observed == 1


def test_two_workers_one_contributor():
    ledger = DelayLedger(2)
    ledger.advance({0: 1})
    assert ledger.t == 2
    assert ledger.d.tolist() == [0, 1]
    assert ledger.tau.tolist() == [1, 2]


def test_single_worker_always_fresh():
    ledger = DelayLedger(1)
    for t in range(2, 50):
        ledger.advance({0: t - 1})
        assert ledger.d.tolist() == [0]
        assert ledger.tau.tolist() == [1]


def test_three_workers_round_robin():
    "Worker 0 last contributes at t = 7, so d_0(9) = 2."
    ledger = DelayLedger(3)
    for t, j in zip(range(2, 10), [1, 2, 0, 1, 2, 0, 1, 2]):
        ledger.advance({j: t - 1})
    assert ledger.t == 9
    assert ledger.d[0] == 2


def test_non_contributors_age_by_one():
    ledger = DelayLedger(3)
    ledger.advance({0: 1})
    before = ledger.d.copy()
    ledger.advance({1: 1})
    assert ledger.d[1] == 0
    assert ledger.d[0] == before[0] + 1
    assert ledger.d[2] == before[2] + 1


def test_empty_contributors_rejected():
    with pytest.raises(InvariantBreach):
        DelayLedger(2).advance({})


def test_model_from_the_future_rejected():
    "A gradient on version t would give tau = 0 < d + 1."
    ledger = DelayLedger(2)
    with pytest.raises(InvariantBreach) as err:
        ledger.advance({1: 2})
    assert err.value.worker_id == 1
    assert err.value.iteration == 2


def test_stale_sample_breach_names_worker():
    "A sample epoch older than the model violates tau >= d + 1."
    ledger = DelayLedger(2)
    ledger.advance({0: 1})
    ledger.advance({1: 2})
    with pytest.raises(InvariantBreach):
        ledger.advance({0: 3}, sample_epochs={0: 2})


def test_synchronised_delays_accepted():
    "Sample epoch = model version + 1 gives tau = d + 1."
    ledger = DelayLedger(2)
    ledger.advance({0: 1}, sample_epochs={0: 2})
    ledger.advance({0: 1}, sample_epochs={0: 2})
    assert ledger.tau[0] == ledger.d[0] + 1


def test_tau_max_tracked_online():
    ledger = DelayLedger(2)
    for t in range(2, 8):
        ledger.advance({0: t - 1})
    assert ledger.tau_max_observed == 7
    assert ledger.tau[1] == 7


def test_functional_advance_leaves_input():
    ledger = DelayLedger(2)
    after = ledger_advance(ledger, {0: 1})
    assert ledger.t == 1
    assert after.t == 2


def test_identical_sequences_identical_ledgers():
    rng = np.random.default_rng(3)
    a, b = DelayLedger(5), DelayLedger(5)
    for t in range(2, 200):
        j = int(rng.integers(5))
        a.advance({j: t - 1})
        b.advance({j: t - 1})
    assert a == b
