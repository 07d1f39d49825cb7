"""Run several algorithms on shared speeds, traces and sample streams."""

from typing import Dict, List, Sequence

import numpy as np

from src.config.constants import FRESH_SAMPLE_ALGORITHMS, AlgorithmKind
from src.config.run_config import RunConfig
from src.state.books import RunBook
from src.state.run_sims import select_stepsize
from src.state.state import SimulationState, build_objective
from src.write_data.write_data import write_table_csv

DEFAULT_TIME_POINTS = 50


def config_for(config: RunConfig, kind: AlgorithmKind) -> RunConfig:
    """Base config with the algorithm swapped in and the mode forced where the algorithm needs one."""
    kind = AlgorithmKind(kind)
    overrides = {"algorithm": {"kind": kind.value}}
    if kind in FRESH_SAMPLE_ALGORITHMS:
        overrides["mode"] = {"kind": "fully_async", "c": 1}
    elif kind == AlgorithmKind.SYNC_SGD:
        overrides["mode"] = {"kind": "lockstep", "c": config.run["n"]}
    return config.replace(**overrides)


def value_at_times(book: RunBook, times: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Step-function lookup: value of the latest record with virtual_time <= each time."""
    idx = np.searchsorted(book.times(), times, side="right") - 1
    return values[np.clip(idx, 0, len(book) - 1)]


def aligned_series(books_by_algorithm: Dict[str, Dict[int, RunBook]], num_points: int = DEFAULT_TIME_POINTS):
    """Seed-averaged loss and grad norm^2 of every algorithm on a common virtual-time grid."""
    horizon = min(max(b.times()[-1] for b in books.values()) for books in books_by_algorithm.values())
    times = np.linspace(0.0, horizon, num_points) if horizon > 0 else np.zeros(1)
    columns = ["virtual_time"]
    series = [times]
    for name, books in books_by_algorithm.items():
        loss = np.mean([value_at_times(b, times, b.losses()) for b in books.values()], axis=0)
        grad = np.mean([value_at_times(b, times, b.grad_norms()) for b in books.values()], axis=0)
        columns += [f"{name}_loss", f"{name}_grad_norm_sq"]
        series += [loss, grad]
    rows = [[float(col[k]) for col in series] for k in range(len(times))]
    return columns, rows


def compare(
    config: RunConfig,
    algorithms: Sequence[str],
    num_points: int = DEFAULT_TIME_POINTS,
    write: bool = True,
) -> dict:
    """
    Every algorithm sees the same objective, speed draws and per-seed sample streams; algorithms
    running in the same mode also share the event trace. Returns the aligned table and the
    per-algorithm avg grad norm^2.
    """
    assert len(algorithms) >= 1, "need at least one algorithm to compare"
    objective = build_objective(config)
    seeds = list(config.run["seeds"])
    books_by_algorithm: Dict[str, Dict[int, RunBook]] = {}
    averages = {}
    for kind in algorithms:
        cfg = config_for(config, kind)
        state = SimulationState(cfg, objective=objective, verbose=False)
        books, _ = select_stepsize(state, seeds, config.run["jobs"])
        books_by_algorithm[state.algorithm_name] = books
        averages[state.algorithm_name] = float(np.mean([b.summary["avg_grad_norm_sq"] for b in books.values()]))
        if config.run["verbose"]:
            print(f"{state.algorithm_name}: avg grad norm^2 {averages[state.algorithm_name]:.6e}", flush=True)

    columns, rows = aligned_series(books_by_algorithm, num_points)
    table = {"columns": columns, "rows": rows, "avg_grad_norm_sq": averages, "books": books_by_algorithm}
    if write:
        header = {
            "schema_version": config.run["schema_version"],
            "config_hash": config.config_hash(),
            "algorithms": list(books_by_algorithm),
            "seeds": seeds,
            "avg_grad_norm_sq": averages,
        }
        state = SimulationState(config, objective=objective, verbose=False)
        write_table_csv(state.output_files.get_comparison_name(), header, columns, rows)
    return table


def ranking(table: dict) -> List[str]:
    """Algorithms ordered from lowest to highest avg grad norm^2."""
    return sorted(table["avg_grad_norm_sq"], key=table["avg_grad_norm_sq"].get)
