"""Compare all algorithms on label-skewed logistic regression at two speed spreads."""

import os

from src.config.run_config import RunConfig
from src.executables.compare import compare, ranking

if __name__ == "__main__":

    speed_stds = [1.0, 5.0]
    algorithms = [
        "dude_asgd",
        "vanilla_asgd",
        "uniform_asgd",
        "shuffled_asgd",
        "sync_sgd",
        "siag_mifa",
        "fedbuff",
    ]

    config = RunConfig.load(os.path.join(os.path.dirname(__file__), "config.toml"))
    for std in speed_stds:
        run_config = config.replace(run={"name": f"{config.run['name']}_std{int(std)}"}, speeds={"std": std})
        table = compare(run_config, algorithms)
        print(f"std={std:g}: " + " < ".join(ranking(table)), flush=True)
