"""Heterogeneity bias: vanilla ASGD stalls at a participation-weighted point, DuDe-ASGD does not."""

import json
import os

from src.config.run_config import RunConfig
from src.executables.compare import compare
from src.executables.verify import bias_suite
from src.state.run_sims import create_runs

if __name__ == "__main__":

    run_conditions = {
        "run_sims": True,
        "run_comparison": True,
        "run_checks": True,
    }

    config = RunConfig.load(os.path.join(os.path.dirname(__file__), "config.toml"))

    if run_conditions["run_sims"]:
        create_runs(config)

    if run_conditions["run_comparison"]:
        compare(config, ["dude_asgd", "vanilla_asgd", "siag_mifa"])

    if run_conditions["run_checks"]:
        print(json.dumps(bias_suite(T=config.run["T"]), indent=4), flush=True)
