"""Wait-free ASGD variants, synchronous SGD, sIAG/MIFA and FedBuff."""

import numpy as np
import pytest

from src.algorithms.fedbuff import FedBuff
from src.calculations.model import ModelVector
from src.config.exceptions import InvariantBreach
from src.events.clock import AsyncMode, SpeedModel, schedule_run
from src.objectives.sampling import SampleStreams
from src.state.state import SimulationState
from tests.algorithms.algorithm_test_config import build, make_config, run, scalar_quadratic


@pytest.mark.parametrize("kind", ["vanilla_asgd", "uniform_asgd", "shuffled_asgd"])
def test_wait_free_variants_one_fresh_gradient(kind):
    _, book = run(algorithm={"kind": kind}, speeds={"std": 3.0})
    assert len(book) == 200
    for record in book.records[1:]:
        (j,) = record.contributors
        assert record.d[j] == 0


def test_vanilla_participation_follows_speed():
    state, _ = run(algorithm={"kind": "vanilla_asgd"}, speeds={"values": [1.0, 1.0, 1.0, 10.0]})
    trace = state.build_trace(0)
    share = trace.participation()
    assert share[3] < share[0] / 5


def test_uniform_dispatch_spreads_updates():
    state, _ = run(algorithm={"kind": "uniform_asgd"}, speeds={"values": [1.0, 1.0, 1.0, 10.0]}, run={"T": 2000})
    trace = state.build_trace(0)
    # the slow worker keeps receiving models, so its backlog grows
    assert trace.max_queue_depth()[3] > 1


def test_wait_free_rejects_batched_trace():
    state = SimulationState(make_config(algorithm={"kind": "vanilla_asgd"}), verbose=False)
    trace = schedule_run(SpeedModel.fixed([1.0] * 4), AsyncMode.semi_async(2), 10)
    with pytest.raises(InvariantBreach):
        state.run_seed(0, trace=trace)


def test_sync_rejects_partial_participation():
    state = SimulationState(make_config(algorithm={"kind": "sync_sgd"}, mode={"kind": "lockstep"}), verbose=False)
    trace = schedule_run(SpeedModel.fixed([1.0] * 4), AsyncMode.fully_async(), 10)
    with pytest.raises(InvariantBreach):
        state.run_seed(0, trace=trace)


def test_sync_lockstep_fresh_every_round():
    _, book = run(algorithm={"kind": "sync_sgd"}, mode={"kind": "lockstep"})
    for record in book.records:
        assert record.tau == [1, 1, 1, 1]
        assert record.d == [0, 0, 0, 0]


def test_siag_delays_synchronised():
    _, book = run(algorithm={"kind": "siag_mifa"}, speeds={"std": 3.0})
    for record in book.records:
        assert [tau - d for tau, d in zip(record.tau, record.d)] == [1, 1, 1, 1]


def test_fedbuff_local_steps_cost_time_and_samples():
    K = 3
    state = SimulationState(
        make_config(algorithm={"kind": "fedbuff", "local_steps": K}, speeds={"values": [1.0, 2.0, 3.0, 4.0]}),
        verbose=False,
    )
    assert state.speed_model.speeds.tolist() == [3.0, 6.0, 9.0, 12.0]
    trace = state.build_trace(0)
    streams = SampleStreams(0)
    algorithm = state.make_algorithm(streams, 0.02)
    assert isinstance(algorithm, FedBuff)
    algorithm.initialize(state.initial_model())
    for entry in trace:
        algorithm.step(entry)
    assert len(streams) == K * (state.n + len(trace))


def test_fedbuff_single_step_matches_sgd_update():
    "With K = 1 the pseudo-gradient is eta_l times the stochastic gradient."
    state = SimulationState(
        make_config(algorithm={"kind": "fedbuff", "eta_local": 0.1, "eta_global": 2.0}, run={"n": 4}),
        verbose=False,
    )
    algorithm = state.make_algorithm(SampleStreams(0), 0.05)
    assert algorithm.eta_local == 0.1
    w0 = state.initial_model()
    server, workers = algorithm.initialize(w0)
    replay = SampleStreams(0)
    g = np.mean([state.objective.stochastic_gradient(i, w0, 1, replay).values for i in range(4)], axis=0)
    assert np.allclose(server.w_tilde.values, -2.0 * 0.1 * g, atol=1e-14)
    assert server.w_tilde.version == 1


def test_fedbuff_local_stepsize_defaults_to_run_stepsize():
    state = SimulationState(make_config(algorithm={"kind": "fedbuff"}), verbose=False)
    assert state.make_algorithm(SampleStreams(0), 0.03).eta_local == 0.03


def test_fedbuff_two_local_steps_by_hand():
    """
    One worker, F = w^2/2 - w, eta_l = 1/2, eta_g = 2, K = 2.
      from 0:   local 0 -> 1/2 -> 3/4, delta = -3/4, w1 = 3/2
      from 3/2: local 3/2 -> 5/4 -> 9/8, delta = 3/8, w2 = 3/4
    """
    obj = scalar_quadratic([1.0], [1.0])
    algorithm = build("fedbuff", obj, 0.5, local_steps=2, eta_global=2.0)
    server, _ = algorithm.initialize(ModelVector(np.zeros(1), version=0))
    assert server.w_tilde.values.tolist() == [1.5]
    assert server.g_tilde.tolist() == [-0.75]
    (entry,) = schedule_run(SpeedModel.fixed([1.0]), AsyncMode.fully_async(), 1)
    outcome = algorithm.step(entry)
    assert outcome.server.w_tilde.values.tolist() == [0.75]
    assert outcome.server.g_tilde.tolist() == [0.375]
    assert len(algorithm.streams) == 4


def test_fedbuff_partial_buffer_uses_only_contributors():
    """m = 2 of 3 workers: the slow worker's large gradient stays out of the first server step."""
    obj = scalar_quadratic([1.0, 1.0, 1.0], [1.0, 2.0, 100.0])
    algorithm = build("fedbuff", obj, 0.5, c=2)
    server, _ = algorithm.initialize(ModelVector(np.zeros(1), version=0))
    w1 = float(server.w_tilde.values[0])
    assert w1 == pytest.approx(0.5 * (1.0 + 2.0 + 100.0) / 3)
    entry = schedule_run(SpeedModel.fixed([1.0, 2.0, 7.0]), AsyncMode.semi_async(2), 1)[0]
    assert entry.contributors == (0, 1)
    assert entry.model_versions == (1, 1)
    outcome = algorithm.step(entry)
    pseudo_grad = 0.5 * ((w1 - 1.0) + (w1 - 2.0)) / 2
    assert outcome.server.g_tilde[0] == pytest.approx(pseudo_grad, rel=1e-12)
    assert outcome.server.w_tilde.values[0] == pytest.approx(w1 - pseudo_grad, rel=1e-12)
    assert [g.worker_id for g in outcome.gradients] == [0, 1]
    assert not algorithm.streams.consumed(2, entry.t)
