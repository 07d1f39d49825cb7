import time
from multiprocessing import Manager, Process
from typing import Dict, List

import numpy as np

from src.config.run_config import RunConfig
from src.events.events import header_event, trace_events
from src.state.books import RunBook
from src.state.state import SimulationState
from src.write_data.write_data import write_json, write_jsonl, write_records_csv, write_records_jsonl


def _run_and_store(state: SimulationState, seed: int, eta: float, results) -> None:
    """Process target: results[seed] is the JSON book or the raised exception."""
    try:
        results[seed] = state.run_seed(seed, eta=eta).to_json()
    except Exception as err:  # re-raised by the parent
        results[seed] = err


def run_multi_process_seeds(state: SimulationState, seeds: List[int], jobs: int, eta: float = None) -> Dict[int, RunBook]:
    """Run every seed, at most `jobs` at a time. Each run is serial and owns its state."""
    books = {}
    if jobs == 1 or len(seeds) == 1:
        for seed in seeds:
            books[seed] = state.run_seed(seed, eta=eta)
        return books

    manager = Manager()
    results = manager.dict()
    for start in range(0, len(seeds), jobs):
        processes = []
        for seed in seeds[start : start + jobs]:
            process = Process(target=_run_and_store, args=(state, seed, eta, results))
            process.start()
            processes.append(process)
        for process in processes:
            process.join()
    for seed in seeds:
        outcome = results.get(seed)
        if isinstance(outcome, Exception):
            manager.shutdown()
            raise outcome
        if outcome is None:
            manager.shutdown()
            raise RuntimeError(f"run for seed {seed} exited without a result")
        books[seed] = RunBook.from_json(outcome)
    manager.shutdown()
    return books


def select_stepsize(state: SimulationState, seeds: List[int], jobs: int):
    """
    With a stepsize grid every candidate is run on all seeds and the one with the smallest
    seed-averaged avg grad norm^2 is kept. Returns (books, eta scores).
    """
    candidates = state.candidate_stepsizes()
    best, best_score, scores = None, None, {}
    for eta in candidates:
        books = run_multi_process_seeds(state, seeds, jobs, eta=eta)
        score = float(np.mean([b.summary["avg_grad_norm_sq"] for b in books.values()]))
        if eta is not None:
            scores[repr(eta)] = score
            if state.verbose:
                print(f"  eta={eta:g}: avg grad norm^2 {score:.6e}", flush=True)
        if best_score is None or score < best_score:
            best, best_score = books, score
    return best, scores


def write_run_outputs(state: SimulationState, books: Dict[int, RunBook], scores: dict = None) -> dict:
    """One record file per (algorithm, seed) and format, optional traces, and the summary JSON."""
    config = state.config
    files = state.output_files
    algorithm = state.algorithm_name
    for seed, book in books.items():
        header = header_event(config, seed, algorithm, book.eta)
        if "jsonl" in config.run["formats"]:
            write_records_jsonl(files.get_record_name(algorithm, seed, "jsonl", config.run["compress"]), header, book)
        if "csv" in config.run["formats"]:
            write_records_csv(files.get_record_name(algorithm, seed, "csv"), header, book)
        if config.run["write_trace"]:
            write_jsonl(files.get_trace_name(algorithm, seed), [header] + trace_events(state.build_trace(seed)))

    summary = {
        "schema_version": config.run["schema_version"],
        "config_hash": config.config_hash(),
        "algorithm": algorithm,
        "runs": [books[s].summary for s in sorted(books)],
        "avg_grad_norm_sq": float(np.mean([b.summary["avg_grad_norm_sq"] for b in books.values()])),
        "selected_eta": next(iter(books.values())).eta,
    }
    if scores:
        summary["grid_scores"] = scores
    write_json(files.get_summary_name(algorithm), summary)
    return summary


def create_runs(config: RunConfig, verbose: bool = None, write: bool = True) -> dict:
    """Main run-function: simulate every seed, select the stepsize and write all output files."""
    state = SimulationState(config, verbose=verbose)
    seeds = list(config.run["seeds"])
    start_time = time.time()
    if state.verbose:
        print(f"\nRunning {state.algorithm_name} on {config.objective['kind']} (n={state.n}, T={state.T})", flush=True)
    books, scores = select_stepsize(state, seeds, config.run["jobs"])
    summary = write_run_outputs(state, books, scores) if write else {
        "runs": [books[s].summary for s in sorted(books)],
    }
    if state.verbose:
        for seed in sorted(books):
            s = books[seed].summary
            print(
                f"seed {seed}: final loss {s['final_loss']:.6e}, avg grad norm^2 {s['avg_grad_norm_sq']:.6e}, "
                f"tau_max {s['tau_max']}",
                flush=True,
            )
        print(f"Finished {len(seeds)} run(s) in {time.time() - start_time:.2f} seconds.\n", flush=True)
    summary["books"] = books
    return summary
