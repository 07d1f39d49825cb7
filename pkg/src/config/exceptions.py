"""Exceptions raised by the simulator."""


class SimulationError(RuntimeError):
    """Base class for fatal simulation diagnostics."""


class ConfigError(ValueError):
    """Run configuration failed schema validation."""


class InvariantBreach(SimulationError):
    """A delay-ledger or sample-freshness invariant was violated."""

    def __init__(self, message: str, worker_id: int = None, iteration: int = None):
        self.message = message
        self.worker_id = worker_id
        self.iteration = iteration
        super().__init__(f"{message} (worker={worker_id}, t={iteration})")

    def __reduce__(self):
        # keep worker/iteration when a run fails inside a child process
        return (self.__class__, (self.message, self.worker_id, self.iteration))


class NumericalBlowUp(SimulationError):
    """A model or gradient entry became NaN/Inf."""

    def __init__(self, message: str, iteration: int = None):
        self.message = message
        self.iteration = iteration
        super().__init__(f"{message} (t={iteration})")

    def __reduce__(self):
        return (self.__class__, (self.message, self.iteration))


class SampleReuseError(SimulationError):
    """A (worker, epoch) sample stream was requested twice in one run."""


class DimensionMismatch(SimulationError):
    """Vectors of incompatible length were combined."""
