"""Parse, validate and emit TOML run configurations."""

import copy
import hashlib

import toml

from src.config.algorithm_params import AlgorithmParameters
from src.config.config import Config
from src.config.constants import (
    FRESH_SAMPLE_ALGORITHMS,
    SCHEMA_VERSION,
    AlgorithmKind,
    DispatchPolicy,
    DISPATCH_FOR_ALGORITHM,
    ModeKind,
    StepsizeRule,
)
from src.config.exceptions import ConfigError
from src.events.clock import AsyncMode, SpeedModel

OBJECTIVE_KINDS = ("quadratic", "logistic")
OUTPUT_FORMATS = ("jsonl", "csv")
# Element type of every list-valued key, given as a sample value.
LIST_ELEMENTS = {
    ("run", "seeds"): 0,
    ("run", "formats"): "",
    ("speeds", "values"): 0.0,
    ("stepsize", "grid"): 0.0,
}


def _same_type(default, value) -> bool:
    if isinstance(default, bool):
        return isinstance(value, bool)
    if isinstance(default, int):
        return isinstance(value, int) and not isinstance(value, bool)
    if isinstance(default, float):
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    return isinstance(value, type(default))


class RunConfig(Config):
    """
    A fully resolved run: defaults from Config overridden section-by-section by user values.
    Unknown sections/keys, wrong types and out-of-range values raise ConfigError.
    """

    def __init__(self, values: dict = None):
        super().__init__()
        values = {} if values is None else copy.deepcopy(values)
        defaults = self.sections()
        unknown = set(values) - set(defaults)
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        for section, given in values.items():
            if not isinstance(given, dict):
                raise ConfigError(f"[{section}] must be a table")
            target = defaults[section]
            for key, value in given.items():
                if key not in target:
                    raise ConfigError(f"unknown key '{key}' in [{section}]")
                if not _same_type(target[key], value):
                    raise ConfigError(
                        f"[{section}] {key} = {value!r} has type {type(value).__name__}, "
                        f"expected {type(target[key]).__name__}"
                    )
                target[key] = float(value) if isinstance(target[key], float) else value
        self.validate()

    # ---- validation -----------------------------------------------------------------
    def validate(self) -> None:
        sections = self.sections()
        for (section, key), sample in LIST_ELEMENTS.items():
            for value in sections[section][key]:
                if not _same_type(sample, value):
                    raise ConfigError(
                        f"[{section}] {key} entry {value!r} has type {type(value).__name__}, "
                        f"expected {type(sample).__name__}"
                    )

        r, o, s, m, a, st = self.run, self.objective, self.speeds, self.mode, self.algorithm, self.stepsize
        checks = [
            (r["schema_version"] == SCHEMA_VERSION, f"schema_version must be {SCHEMA_VERSION}"),
            (r["n"] >= 1, "n must be >= 1"),
            (r["p"] >= 1, "p must be >= 1"),
            (r["T"] >= 1, "T must be >= 1"),
            (len(r["seeds"]) >= 1, "seeds must list at least one seed"),
            (all(isinstance(x, int) and x >= 0 for x in r["seeds"]), "seeds must be non-negative integers"),
            (r["jobs"] >= 1, "jobs must be >= 1"),
            (all(f in OUTPUT_FORMATS for f in r["formats"]), f"formats must be within {OUTPUT_FORMATS}"),
            (o["kind"] in OBJECTIVE_KINDS, f"objective kind must be one of {OBJECTIVE_KINDS}"),
            (o["hetero"] >= 0, "hetero must be >= 0"),
            (o["sigma"] >= 0, "sigma must be >= 0"),
            (o["samples"] >= 1 and o["num_classes"] >= 1, "logistic needs samples, num_classes >= 1"),
            (o["alpha"] > 0, "Dirichlet alpha must be > 0"),
            (o["reg"] >= 0, "reg must be >= 0"),
            (s["std"] > 0 or len(s["values"]) > 0, "speed std must be > 0"),
            (len(s["values"]) in (0, r["n"]), "speeds.values must list one speed per worker"),
            (all(v > 0 for v in s["values"]), "speeds.values must be positive"),
            (m["kind"] in [k.value for k in ModeKind], f"mode kind must be one of {[k.value for k in ModeKind]}"),
            (1 <= m["c"] <= r["n"], "mode c must lie in [1, n]"),
            (m["latency"] >= 0, "latency must be >= 0"),
            (a["kind"] in [k.value for k in AlgorithmKind], "unknown algorithm kind"),
            (a["batch_size"] >= 1, "batch_size must be >= 1"),
            (a["local_steps"] >= 1, "local_steps must be >= 1"),
            (a["eta_local"] >= 0 and a["eta_global"] > 0, "stepsizes must be positive"),
            (a["shuffle_period"] >= 0, "shuffle_period must be >= 0"),
            (st["rule"] in [k.value for k in StepsizeRule], "unknown stepsize rule"),
            (st["eta"] > 0, "eta must be > 0"),
            (len(st["grid"]) >= 1 and all(g > 0 for g in st["grid"]), "grid stepsizes must be positive"),
            (min(st["delta"], st["L"], st["sigma"], st["tau_max"]) >= 0, "stepsize overrides must be >= 0"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)

        kind = self.algorithm_kind
        mode = self.async_mode
        if kind in FRESH_SAMPLE_ALGORITHMS and mode.batch(r["n"]) != 1:
            raise ConfigError(f"{kind.value} runs fully asynchronously; set [mode] kind = 'fully_async'")
        if kind == AlgorithmKind.SYNC_SGD and mode.batch(r["n"]) != r["n"]:
            raise ConfigError("sync_sgd needs [mode] kind = 'lockstep'")

    # ---- resolved views -------------------------------------------------------------
    @property
    def algorithm_kind(self) -> AlgorithmKind:
        return AlgorithmKind(self.algorithm["kind"])

    @property
    def async_mode(self) -> AsyncMode:
        kind = ModeKind(self.mode["kind"])
        if kind == ModeKind.LOCKSTEP:
            return AsyncMode.lockstep(self.run["n"])
        return AsyncMode(kind, self.mode["c"])

    @property
    def dispatch_policy(self) -> DispatchPolicy:
        return DISPATCH_FOR_ALGORITHM.get(self.algorithm_kind, DispatchPolicy.RETURN)

    @property
    def stepsize_rule(self) -> StepsizeRule:
        return StepsizeRule(self.stepsize["rule"])

    def algorithm_parameters(self) -> AlgorithmParameters:
        a = self.algorithm
        params = AlgorithmParameters(
            kind=self.algorithm_kind,
            batch_size=a["batch_size"],
            c=self.async_mode.batch(self.run["n"]),
            local_steps=a["local_steps"],
            eta_local=a["eta_local"] or None,
            eta_global=a["eta_global"],
            shuffle_period=a["shuffle_period"] or None,
            debug_oracle=a["debug_oracle"],
        )
        params.validate_for(self.run["n"])
        return params

    def speed_model(self) -> SpeedModel:
        s = self.speeds
        if s["values"]:
            model = SpeedModel.fixed(s["values"])
            model.seed = s["seed"]
        else:
            model = SpeedModel(self.run["n"], mu=s["mu"], std=s["std"], seed=s["seed"])
        if self.algorithm_kind == AlgorithmKind.FEDBUFF:
            # K local steps cost K gradient times
            model = model.scaled(self.algorithm["local_steps"])
        return model

    # ---- (de)serialisation ----------------------------------------------------------
    def to_dict(self) -> dict:
        return copy.deepcopy(self.sections())

    def emit(self) -> str:
        """TOML text of the resolved config (every key present, sections in fixed order)."""
        return toml.dumps(self.to_dict())

    @classmethod
    def parse(cls, text: str) -> "RunConfig":
        try:
            values = toml.loads(text)
        except toml.TomlDecodeError as err:
            raise ConfigError(f"could not parse config: {err}") from err
        return cls(values)

    @classmethod
    def load(cls, filepath: str) -> "RunConfig":
        try:
            with open(filepath, "r", encoding="UTF-8") as f:
                text = f.read()
        except OSError as err:
            raise ConfigError(f"could not read config file {filepath}: {err}") from err
        return cls.parse(text)

    def replace(self, **sections) -> "RunConfig":
        """Copy with some keys overridden, e.g. replace(run={"T": 64}, mode={"kind": "lockstep"})."""
        values = self.to_dict()
        for section, overrides in sections.items():
            if section not in values:
                raise ConfigError(f"unknown config section: {section}")
            values[section].update(overrides)
        return RunConfig(values)

    def config_hash(self) -> str:
        return hashlib.sha256(self.emit().encode("UTF-8")).hexdigest()

    def __eq__(self, other) -> bool:
        return isinstance(other, RunConfig) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return (
            f"RunConfig(name={self.run['name']}, algorithm={self.algorithm['kind']}, n={self.run['n']}, "
            f"T={self.run['T']}, mode={self.mode['kind']})"
        )
