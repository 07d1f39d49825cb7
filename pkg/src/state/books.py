"Handles per-iteration run records and their containing book."

from typing import List, Sequence

import numpy as np

from src.events.event_constants import EventConstants


class RunRecord:
    "One server iteration as seen by the metrics layer."

    __slots__ = ("type", "t", "virtual_time", "loss", "grad_norm_sq", "contributors", "tau", "d", "queue_depths")

    def __init__(
        self,
        t: int,
        virtual_time: float,
        loss: float,
        grad_norm_sq: float,
        contributors: Sequence[int],
        tau: Sequence[int],
        d: Sequence[int],
        queue_depths: Sequence[int] = (),
        record_type: str = EventConstants.UPDATE.value,
    ):
        assert t >= 1, "iterations start at t = 1"
        assert grad_norm_sq >= 0, "squared gradient norm must be non-negative"
        self.type = record_type
        self.t = int(t)
        self.virtual_time = float(virtual_time)
        self.loss = float(loss)
        self.grad_norm_sq = float(grad_norm_sq)
        self.contributors = [int(j) for j in contributors]
        self.tau = [int(x) for x in tau]
        self.d = [int(x) for x in d]
        self.queue_depths = [int(x) for x in queue_depths]

    def to_json(self) -> dict:
        "Return JSON-ready object."
        return {
            "type": self.type,
            "t": self.t,
            "virtual_time": self.virtual_time,
            "loss": self.loss,
            "grad_norm_sq": self.grad_norm_sq,
            "contributors": self.contributors,
            "tau": self.tau,
            "d": self.d,
            "queue_depths": self.queue_depths,
        }

    @classmethod
    def from_json(cls, blob: dict) -> "RunRecord":
        return cls(
            t=blob["t"],
            virtual_time=blob["virtual_time"],
            loss=blob["loss"],
            grad_norm_sq=blob["grad_norm_sq"],
            contributors=blob["contributors"],
            tau=blob["tau"],
            d=blob["d"],
            queue_depths=blob.get("queue_depths", ()),
            record_type=blob.get("type", EventConstants.UPDATE.value),
        )

    def __repr__(self):
        return f"RunRecord(t={self.t}, time={self.virtual_time:g}, grad_norm_sq={self.grad_norm_sq:.3e})"


class RunBook:
    "Stores every record of one (algorithm, seed, stepsize) run."

    def __init__(self, seed: int, algorithm: str, eta: float):
        self.seed = int(seed)
        self.algorithm = algorithm
        self.eta = float(eta)
        self.records: List[RunRecord] = []
        self.summary = {}

    def add_record(self, record: RunRecord) -> None:
        "Append-only; iterations must strictly increase."
        if self.records and record.t <= self.records[-1].t:
            raise ValueError(f"record t={record.t} does not follow t={self.records[-1].t}")
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def grad_norms(self) -> np.ndarray:
        return np.array([r.grad_norm_sq for r in self.records])

    def losses(self) -> np.ndarray:
        return np.array([r.loss for r in self.records])

    def times(self) -> np.ndarray:
        return np.array([r.virtual_time for r in self.records])

    def to_json(self) -> dict:
        "Return JSON-ready object."
        return {
            "seed": self.seed,
            "algorithm": self.algorithm,
            "eta": self.eta,
            "records": [r.to_json() for r in self.records],
            "summary": self.summary,
        }

    @classmethod
    def from_json(cls, blob: dict) -> "RunBook":
        book = cls(blob["seed"], blob["algorithm"], blob["eta"])
        for r in blob["records"]:
            book.add_record(RunRecord.from_json(r))
        book.summary = dict(blob.get("summary", {}))
        return book
