"""Property suites backing the `verify` subcommand. Every suite returns a JSON-ready report."""

from typing import Callable, Dict, List

import numpy as np

from src.calculations.buffers import aggregation_error
from src.calculations.model import ModelVector
from src.config.exceptions import InvariantBreach
from src.config.run_config import RunConfig
from src.events.clock import AsyncMode, SpeedModel, observed_delays, schedule_run
from src.metrics.checks import lemma_variance_check, second_moment_check, unbiasedness_check
from src.metrics.convergence import measure_rate
from src.objectives.partition import dirichlet_partition
from src.objectives.quadratic import make_quadratic
from src.objectives.sampling import LABEL_SALT, STALE_MODEL_SALT, SampleStreams, keyed_rng
from src.state.state import SimulationState

REDUCTION_ATOL = 1e-12
AGGREGATION_TOL = 1e-9
# Dir(1000) acceptance: relative band around 1/n and the share of (class, worker) cells inside it.
UNIFORM_TOLERANCE = 0.1
UNIFORM_CELL_FRACTION = 0.95


def check(name: str, passed: bool, **details) -> dict:
    out = {"name": name, "passed": bool(passed)}
    out.update(details)
    return out


def report(suite: str, checks: List[dict]) -> dict:
    return {"suite": suite, "passed": all(c["passed"] for c in checks), "checks": checks}


def quadratic_config(**sections) -> RunConfig:
    """Quiet in-memory config used by the suites."""
    base = {"run": {"verbose": False, "seeds": [0]}, "objective": {"kind": "quadratic"}}
    for section, values in sections.items():
        base.setdefault(section, {}).update(values)
    return RunConfig(base)


def iterate_path(state: SimulationState, seed: int, eta: float) -> np.ndarray:
    """Models w^1..w^T of one run, stacked."""
    trace = state.build_trace(seed)
    algorithm = state.make_algorithm(SampleStreams(seed), eta)
    server, _ = algorithm.initialize(state.initial_model())
    path = [server.w_tilde.values]
    for entry in trace:
        path.append(algorithm.step(entry).server.w_tilde.values)
    return np.array(path)


# ---- invariants ------------------------------------------------------------------------
def aggregation_identity(T: int = 10_000, n: int = 8, p: int = 32, seed: int = 0) -> dict:
    """Incremental g~ against the brute-force average of all buffers after every iteration."""
    cfg = quadratic_config(
        run={"n": n, "p": p, "T": T},
        objective={"hetero": 1.0, "sigma": 0.5, "seed": seed},
        stepsize={"eta": 0.01},
    )
    state = SimulationState(cfg, verbose=False)
    algorithm = state.make_algorithm(SampleStreams(seed), cfg.stepsize["eta"])
    algorithm.initialize(state.initial_model())
    worst = aggregation_error(algorithm.server, algorithm.workers)
    for entry in state.build_trace(seed):
        algorithm.step(entry)
        worst = max(worst, aggregation_error(algorithm.server, algorithm.workers))
    return check("aggregation_identity", worst <= AGGREGATION_TOL, max_rel_error=worst, T=T)


def dual_delay_invariant(T: int = 50_000, n_values=(2, 8, 32), stds=(1.0, 5.0), seed: int = 0) -> dict:
    """Replay randomised schedules through the ledger; any tau_i < d_i + 1 is a violation."""
    violations, schedules = 0, 0
    for n in n_values:
        for std in stds:
            speeds = SpeedModel(n, mu=1.0, std=std, seed=seed)
            for c in sorted({1, max(n // 2, 1), n}):
                mode = AsyncMode.fully_async() if c == 1 else AsyncMode.semi_async(c)
                trace = schedule_run(speeds, mode, T, seed=seed)
                schedules += 1
                try:
                    for _, tau, d in trace.delay_snapshots():
                        violations += int(np.count_nonzero(tau < d + 1))
                except InvariantBreach:
                    violations += 1
    return check("dual_delay_invariant", violations == 0, violations=violations, schedules=schedules, T=T)


def semi_async_delay_relation(n: int = 8, T: int = 400) -> dict:
    """Equal speeds: tau_max under semi_async(c) equals tau_max(fully async) / c within 1."""
    speeds = SpeedModel.fixed([1.0] * n)
    tau_full, _ = observed_delays(schedule_run(speeds, AsyncMode.fully_async(), T))
    observed = {}
    ok = True
    for c in sorted({2, 4, n}):
        if c > n:
            continue
        tau_c, _ = observed_delays(schedule_run(speeds, AsyncMode.semi_async(c), T))
        observed[str(c)] = tau_c
        ok = ok and abs(tau_c - tau_full / c) <= 1
    return check("semi_async_delay_relation", ok, tau_max_fully_async=tau_full, tau_max_semi_async=observed)


def partition_concentration(m: int = 10_000, K: int = 10, n: int = 10, seed: int = 0) -> List[dict]:
    """Dir(1000) concentrates at uniform; Dir(0.1) empirical shares track the recorded draws."""
    labels = keyed_rng(seed, LABEL_SALT).integers(0, K, size=m)
    flat = dirichlet_partition(labels, n, 1000.0, seed)
    deviation = np.abs(flat.proportions - 1.0 / n)
    worker_shares = flat.proportions.mean(axis=0)
    within = float(np.mean(deviation <= UNIFORM_TOLERANCE / n))
    flat_ok = bool(
        np.mean(deviation) <= UNIFORM_TOLERANCE / n
        and np.all(np.abs(worker_shares - 1.0 / n) <= UNIFORM_TOLERANCE / n)
        and within >= UNIFORM_CELL_FRACTION
    )
    empirical_shares = np.bincount(flat.assignment, minlength=n) / m
    skewed = dirichlet_partition(labels, n, 0.1, seed)
    counts = skewed.counts()
    m_k = counts.sum(axis=1, keepdims=True)
    empirical = counts / m_k
    p = skewed.proportions
    band = 4.0 * np.sqrt(p * (1.0 - p) / m_k) + 1.0 / m_k
    skew_dev = float(np.max(np.abs(empirical - p) - band))
    return [
        check(
            "dirichlet_uniform_limit",
            flat_ok,
            max_cell_deviation=float(deviation.max()),
            cells_within=within,
            max_empirical_share_deviation=float(np.max(np.abs(empirical_shares - 1.0 / n))),
        ),
        check("dirichlet_binomial_bands", skew_dev <= 0.0, worst_margin=skew_dev),
    ]


def invariants_suite(T_aggregation: int = 10_000, T_schedule: int = 50_000) -> dict:
    checks = [
        aggregation_identity(T=T_aggregation),
        dual_delay_invariant(T=T_schedule),
        semi_async_delay_relation(),
    ]
    checks.extend(partition_concentration())
    return report("invariants", checks)


# ---- reductions ------------------------------------------------------------------------
def _max_deviation(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


def reductions_suite(T: int = 1000, n: int = 8, p: int = 16, eta: float = 0.05, seed: int = 0) -> dict:
    """DuDe collapses to sync SGD under lockstep and to sIAG/MIFA when tau = d + 1."""
    common = {
        "run": {"n": n, "p": p, "T": T},
        "objective": {"hetero": 1.0, "sigma": 0.5},
        "stepsize": {"eta": eta},
    }

    def path(algorithm: str, mode: dict, **extra) -> np.ndarray:
        sections = {k: dict(v) for k, v in common.items()}
        sections["algorithm"] = {"kind": algorithm, **extra}
        sections["mode"] = mode
        return iterate_path(SimulationState(quadratic_config(**sections), verbose=False), seed, eta)

    lockstep = {"kind": "lockstep", "c": n}
    semi_full = {"kind": "semi_async", "c": n}
    dude_lock = path("dude_asgd", lockstep)
    sync = path("sync_sgd", lockstep)
    fedbuff = path("fedbuff", lockstep, local_steps=1, eta_global=1.0)
    dude_semi = path("dude_asgd", semi_full)
    siag = path("siag_mifa", semi_full)

    single = {k: dict(v) for k, v in common.items()}
    single["run"]["n"] = 1
    dude_one = iterate_path(
        SimulationState(quadratic_config(**single, algorithm={"kind": "dude_asgd"}), verbose=False), seed, eta
    )
    vanilla_one = iterate_path(
        SimulationState(quadratic_config(**single, algorithm={"kind": "vanilla_asgd"}), verbose=False), seed, eta
    )

    pairs = {
        "dude_lockstep_vs_sync_sgd": (dude_lock, sync),
        "dude_semi_async_vs_siag_mifa": (dude_semi, siag),
        "fedbuff_single_step_vs_sync_sgd": (fedbuff, sync),
        "dude_vs_vanilla_single_worker": (dude_one, vanilla_one),
    }
    checks = []
    for name, (a, b) in pairs.items():
        dev = _max_deviation(a, b)
        checks.append(check(name, dev <= REDUCTION_ATOL, max_deviation=dev, steps=len(a)))
    return report("reductions", checks)


# ---- heterogeneity bias ------------------------------------------------------------------
def bias_suite(T: int = 20_000, p: int = 4, hetero: float = 0.5, eta: float = 0.01, seed: int = 0) -> dict:
    """
    Two noise-free workers with speeds 1 and 10. Vanilla ASGD settles at the fixed point of the
    participation-weighted gradient; DuDe-ASGD reaches the true stationary point.
    """
    sections = {
        "run": {"n": 2, "p": p, "T": T},
        "objective": {"hetero": hetero, "sigma": 0.0, "seed": seed},
        "speeds": {"values": [1.0, 10.0]},
        "stepsize": {"eta": eta},
    }
    vanilla_state = SimulationState(quadratic_config(**sections, algorithm={"kind": "vanilla_asgd"}), verbose=False)
    vanilla = vanilla_state.run_seed(seed)
    dude_state = SimulationState(quadratic_config(**sections, algorithm={"kind": "dude_asgd"}), verbose=False)
    dude = dude_state.run_seed(seed)

    obj = vanilla_state.objective
    weights = np.array(vanilla.summary["participation"])
    w_biased = obj.weighted_stationary_point(weights)
    oracle_gap = obj.grad_norm_sq(w_biased)
    tail = max(len(vanilla) // 10, 1)
    vanilla_tail = float(vanilla.grad_norms()[-tail:].mean())
    dude_final = obj.grad_norm_sq(dude_state.algorithm.server.w_tilde)
    return report(
        "bias",
        [
            check("heterogeneity_positive", oracle_gap > 0, oracle_gap=oracle_gap),
            check(
                "vanilla_asgd_biased",
                vanilla_tail >= 0.5 * oracle_gap,
                tail_grad_norm_sq=vanilla_tail,
                oracle_gap=oracle_gap,
                participation=weights.tolist(),
            ),
            check("dude_asgd_unbiased", dude_final <= 1e-10, final_grad_norm_sq=dude_final),
        ],
    )


# ---- rate ----------------------------------------------------------------------------
def rate_suite(T_grid=(2**10, 2**12, 2**14, 2**16), seeds=(0, 1, 2), n: int = 8, p: int = 8, jobs: int = 1) -> dict:
    """log-log slope of avg grad norm^2 against T with the theorem1 stepsize."""
    cfg = quadratic_config(
        run={"n": n, "p": p, "seeds": list(seeds)},
        objective={"hetero": 0.5, "sigma": 0.5},
        stepsize={"rule": "theorem1"},
    )
    fit = measure_rate(cfg, T_grid, seeds=seeds, jobs=jobs)
    return report("rate", [check("rate_exponent", -0.65 <= fit.slope <= -0.35, **fit.to_dict())])


# ---- lemma ---------------------------------------------------------------------------
def lemma_suite(M: int = 100_000, n: int = 8, p: int = 8, sigma: float = 1.0, seed: int = 0) -> dict:
    """Aggregated-noise variance at frozen stale iterates plus the per-worker noise constants."""
    obj = make_quadratic(n, p, hetero=1.0, sigma=sigma, seed=seed)
    rng = keyed_rng(seed, STALE_MODEL_SALT)
    models = [ModelVector(rng.standard_normal(p), version=k) for k in range(n)]
    lemma = lemma_variance_check(obj, models, M, seed=seed)
    ratio = lemma.estimate / lemma.bound
    checks = [
        check("lemma_variance_bound", lemma.passed, **lemma.details()),
        check("lemma_variance_equality", 0.97 <= ratio <= 1.03, ratio=ratio),
    ]
    w = models[0]
    for i in range(min(n, 2)):
        unbiased = unbiasedness_check(obj, w, i, M, seed=seed)
        moment = second_moment_check(obj, w, i, M, seed=seed)
        checks.append(check(f"unbiased_worker{i}", unbiased.passed, **unbiased.details()))
        checks.append(
            check(
                f"noise_second_moment_worker{i}",
                0.97 <= moment.estimate / moment.bound <= 1.03,
                **moment.details(),
            )
        )
    return report("lemma", checks)


SUITES: Dict[str, Callable[[], dict]] = {
    "invariants": invariants_suite,
    "reductions": reductions_suite,
    "bias": bias_suite,
    "rate": rate_suite,
    "lemma": lemma_suite,
}


def run_suite(name: str) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown verify suite '{name}'; choose from {sorted(SUITES)}")
    return SUITES[name]()
