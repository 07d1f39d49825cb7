"""Shared constants: schema version, exit codes, algorithm and mode names."""

from enum import Enum

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG_INVALID = 2
EXIT_NUMERIC_BLOWUP = 3

# Relative tolerance for incremental vs. brute-force aggregation.
AGGREGATION_RTOL = 1e-9

# Default candidates for grid stepsize selection.
DEFAULT_STEPSIZE_GRID = (0.001, 0.005, 0.01)


class AlgorithmKind(Enum):
    "All supported training algorithms."

    DUDE_ASGD = "dude_asgd"
    VANILLA_ASGD = "vanilla_asgd"
    UNIFORM_ASGD = "uniform_asgd"
    SHUFFLED_ASGD = "shuffled_asgd"
    SYNC_SGD = "sync_sgd"
    SIAG_MIFA = "siag_mifa"
    FEDBUFF = "fedbuff"


class ModeKind(Enum):
    "Server waiting discipline."

    FULLY_ASYNC = "fully_async"
    SEMI_ASYNC = "semi_async"
    LOCKSTEP = "lockstep"


class DispatchPolicy(Enum):
    "Which worker receives a freshly produced model."

    RETURN = "return"
    UNIFORM = "uniform"
    SHUFFLED = "shuffled"


class StepsizeRule(Enum):
    "How the server stepsize is resolved."

    EXPLICIT = "explicit"
    THEOREM1 = "theorem1"
    GRID = "grid"


# Algorithms whose update uses a single fresh-sample gradient (no aggregation buffers).
FRESH_SAMPLE_ALGORITHMS = (
    AlgorithmKind.VANILLA_ASGD,
    AlgorithmKind.UNIFORM_ASGD,
    AlgorithmKind.SHUFFLED_ASGD,
)

DISPATCH_FOR_ALGORITHM = {
    AlgorithmKind.UNIFORM_ASGD: DispatchPolicy.UNIFORM,
    AlgorithmKind.SHUFFLED_ASGD: DispatchPolicy.SHUFFLED,
}
