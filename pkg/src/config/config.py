"""Set standard run configuration with default values."""

from src.config.constants import DEFAULT_STEPSIZE_GRID, SCHEMA_VERSION


class Config:
    """
    Sets the default values for every configuration section.
    Values supplied in a run file (see run_config.py) override these; keys that do not appear
    here are rejected.
    """

    def __init__(self):
        self.run = {
            "name": "run",
            "schema_version": SCHEMA_VERSION,
            "n": 8,
            "p": 32,
            "T": 1000,
            "seeds": [0, 1, 2],
            "jobs": 1,
            "output_dir": "",
            "compress": False,
            "formats": ["jsonl", "csv"],
            "write_trace": False,
            "verbose": True,
        }
        # hetero/sigma apply to quadratics; samples/num_classes/alpha/reg to logistic objectives
        self.objective = {
            "kind": "quadratic",
            "hetero": 1.0,
            "sigma": 0.5,
            "seed": 0,
            "samples": 2000,
            "num_classes": 10,
            "alpha": 0.1,
            "reg": 1e-3,
        }
        self.speeds = {
            "mu": 1.0,
            "std": 1.0,
            "seed": 0,
            "values": [],
        }
        self.mode = {
            "kind": "fully_async",
            "c": 1,
            "latency": 0.0,
        }
        self.algorithm = {
            "kind": "dude_asgd",
            "batch_size": 1,
            "local_steps": 1,
            "eta_local": 0.0,
            "eta_global": 1.0,
            "shuffle_period": 0,
            "debug_oracle": False,
        }
        # Optional constant overrides (0 = take from the objective / trace)
        self.stepsize = {
            "rule": "explicit",
            "eta": 0.01,
            "grid": list(DEFAULT_STEPSIZE_GRID),
            "delta": 0.0,
            "L": 0.0,
            "sigma": 0.0,
            "tau_max": 0,
        }

    def sections(self) -> dict:
        return {
            "run": self.run,
            "objective": self.objective,
            "speeds": self.speeds,
            "mode": self.mode,
            "algorithm": self.algorithm,
            "stepsize": self.stepsize,
        }
