from src.config.constants import AlgorithmKind


class AlgorithmParameters:
    """
    ##Sample AlgorithmParameters Input##
    kind=AlgorithmKind.FEDBUFF,
    batch_size=64,
    c=4,
    local_steps=2,
    eta_local=0.01,
    eta_global=1.0,
    shuffle_period=None,
    debug_oracle=False,
    """

    def __init__(
        self,
        kind: AlgorithmKind,
        batch_size: int = 1,
        c: int = 1,
        local_steps: int = 1,
        eta_local: float = None,
        eta_global: float = 1.0,
        shuffle_period: int = None,
        debug_oracle: bool = False,
    ):
        self.kind = AlgorithmKind(kind)
        assert int(batch_size) >= 1, "batch size must be >= 1"
        assert int(c) >= 1, "semi-async batch c must be >= 1"
        assert int(local_steps) >= 1, "FedBuff needs K >= 1 local steps"
        assert eta_local is None or eta_local > 0, "local stepsize must be positive"
        assert eta_global > 0, "global stepsize must be positive"
        assert shuffle_period is None or int(shuffle_period) >= 1, "shuffle period must be >= 1"
        self.batch_size = int(batch_size)
        self.c = int(c)
        self.local_steps = int(local_steps)
        self.eta_local = eta_local
        self.eta_global = float(eta_global)
        self.shuffle_period = shuffle_period
        self.debug_oracle = bool(debug_oracle)

    def validate_for(self, n: int) -> None:
        """Checks that depend on the worker count."""
        assert 1 <= self.c <= n, f"c={self.c} must lie in [1, n={n}]"

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind.value,
            "batch_size": self.batch_size,
            "c": self.c,
            "local_steps": self.local_steps,
            "eta_global": self.eta_global,
            "debug_oracle": self.debug_oracle,
        }
        if self.eta_local is not None:
            out["eta_local"] = self.eta_local
        if self.shuffle_period is not None:
            out["shuffle_period"] = self.shuffle_period
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgorithmParameters) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return (
            f"AlgorithmParameters(kind={self.kind.value}, batch_size={self.batch_size}, c={self.c}, "
            f"local_steps={self.local_steps}, eta_local={self.eta_local}, eta_global={self.eta_global})"
        )
