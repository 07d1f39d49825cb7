"""Stationarity averages, rate-exponent fits and linear-speedup checks."""

from math import log10
from typing import Dict, Iterable, List, Sequence
from warnings import warn

import numpy as np

from src.config.run_config import RunConfig
from src.state.books import RunBook, RunRecord
from src.state.run_sims import run_multi_process_seeds
from src.state.state import SimulationState

# Fraction of iterations dropped before averaging in rate and speedup measurements.
BURN_IN = 0.1
MIN_RATE_POINTS = 4
MIN_RATE_DECADES = 1.5


def _grad_norms(run) -> np.ndarray:
    if isinstance(run, RunBook):
        return run.grad_norms()
    return np.array([r.grad_norm_sq if isinstance(r, RunRecord) else float(r) for r in run])


def avg_grad_norm_sq(runs: Iterable, T: int = None, burn_in: float = 0.0) -> float:
    """
    Mean over runs of (1/T) sum_t ||grad F(w^{t-1})||^2 for t = 1..T. `runs` holds RunBooks
    or record lists; `burn_in` drops that fraction of the leading iterations first.
    """
    assert 0.0 <= burn_in < 1.0, "burn-in must be a fraction in [0, 1)"
    per_run = []
    for run in runs:
        norms = _grad_norms(run)
        length = len(norms) if T is None else T
        if len(norms) < length or length < 1:
            raise ValueError(f"run has {len(norms)} records, fewer than T={length}")
        start = int(burn_in * length)
        per_run.append(float(norms[start:length].mean()))
    if not per_run:
        raise ValueError("need at least one completed run")
    return float(np.mean(per_run))


def seed_spread(runs: Iterable, T: int = None) -> float:
    """Standard deviation across runs of the per-run average."""
    values = [avg_grad_norm_sq([run], T) for run in runs]
    return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0


class RateFit:
    """Least-squares line through (log T, log avg grad norm^2)."""

    def __init__(self, slope: float, intercept: float, r_squared: float, T_grid: Sequence[int]):
        self.slope = float(slope)
        self.intercept = float(intercept)
        self.r_squared = float(r_squared)
        self.T_grid = [int(T) for T in T_grid]

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "r_squared": self.r_squared, "T_grid": self.T_grid}

    def __repr__(self):
        return f"RateFit(slope={self.slope:.3f}, r_squared={self.r_squared:.3f}, T_grid={self.T_grid})"


def rate_fit(T_grid: Sequence[int], values: Sequence[float]) -> RateFit:
    """Fit log(value) = slope * log(T) + intercept."""
    T_grid = np.asarray(T_grid, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    assert T_grid.shape == values.shape, "one value per T"
    assert len(T_grid) >= MIN_RATE_POINTS, f"need at least {MIN_RATE_POINTS} values of T"
    assert np.all(values > 0), "rate fit needs positive averages"
    span = log10(T_grid.max() / T_grid.min())
    if span < MIN_RATE_DECADES:
        warn(f"T grid spans only {span:.2f} decades; the fitted exponent is poorly determined")
    x, y = np.log(T_grid), np.log(values)
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    total = y - y.mean()
    ss_tot = float(total @ total)
    r_squared = 1.0 - float(residual @ residual) / ss_tot if ss_tot > 0 else 1.0
    return RateFit(slope, intercept, min(max(r_squared, 0.0), 1.0), T_grid.astype(int).tolist())


def measure_rate(
    config: RunConfig,
    T_grid: Sequence[int],
    seeds: Sequence[int] = None,
    jobs: int = 1,
    burn_in: float = 0.0,
) -> RateFit:
    """
    Run the config at every T with the theorem1 stepsize and fit the exponent of the full
    average. A burn-in also drops the initial-gap term, which decays geometrically on strongly
    convex objectives and steepens the slope.
    """
    seeds = list(config.run["seeds"] if seeds is None else seeds)
    values = []
    for T in T_grid:
        cfg = config.replace(run={"T": int(T)}, stepsize={"rule": "theorem1"})
        state = SimulationState(cfg, verbose=False)
        books = run_multi_process_seeds(state, seeds, jobs)
        values.append(avg_grad_norm_sq(books.values(), burn_in=burn_in))
    return rate_fit(T_grid, values)


def speedup_config(config: RunConfig, n: int, n_min: int) -> RunConfig:
    """Equal speeds and semi_async(n / n_min), so every n sees the tau_max of n_min workers."""
    assert n % n_min == 0, "worker counts must be multiples of the smallest one"
    c = n // n_min
    mode = {"kind": "fully_async", "c": 1} if c == 1 else {"kind": "semi_async", "c": c}
    return config.replace(
        run={"n": n},
        speeds={"values": [config.speeds["mu"]] * n},
        mode=mode,
    )


def speedup_check(config: RunConfig, n_values: Sequence[int], seeds: Sequence[int] = None, jobs: int = 1) -> Dict:
    """
    avg grad norm^2 at fixed T for every n (matched tau_max) and the ratios between
    consecutive worker counts; a linear speedup gives ratio n_next / n.
    """
    n_values = sorted(int(n) for n in n_values)
    seeds = list(config.run["seeds"] if seeds is None else seeds)
    values: List[float] = []
    tau_max: List[int] = []
    for n in n_values:
        state = SimulationState(speedup_config(config, n, n_values[0]), verbose=False)
        books = run_multi_process_seeds(state, seeds, jobs)
        values.append(avg_grad_norm_sq(books.values(), burn_in=BURN_IN))
        tau_max.append(max(b.summary["tau_max"] for b in books.values()))
    ratios = [values[k] / values[k + 1] for k in range(len(values) - 1)]
    return {"n_values": n_values, "avg_grad_norm_sq": values, "tau_max": tau_max, "ratios": ratios}
