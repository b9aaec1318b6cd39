"""Run configurations and the named presets.

A run config is a JSON object::

    {"name": ..., "size": "pocket2", "metric": "qtm", "representation": "sticker2",
     "n_tuples": 60, "tuple_length": 7,
     "network": {...}, "train": {...}, "wrap": {...},
     "eval": {"iterations": [0, 100], "p_min": 1, "p_max": 14, "batch": 200,
              "e_eval": 50, "agents": 3}}

Every section is optional except the cube identifiers; missing keys take
the defaults of :class:`NetConfig`, :class:`TrainConfig` and :class:`WrapConfig`.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .board import Representation
from .cube import CubeVariant
from .mcts import WrapConfig
from .network import NetConfig
from .trainer import TrainConfig


@dataclass(frozen=True)
class EvalPlan:
    iterations: tuple = (0, 100)
    p_min: int = 1
    p_max: int = 14
    batch: int = 200
    e_eval: int = 50
    agents: int = 3
    n_sym: tuple = (0,)

    def __post_init__(self):
        if self.p_min < 1 or self.p_max < self.p_min:
            raise ValueError("need 1 <= p_min <= p_max")
        if self.batch < 1 or self.e_eval < 1 or self.agents < 1:
            raise ValueError("batch, e_eval and agents must be positive")


@dataclass(frozen=True)
class RunConfig:
    name: str
    variant: CubeVariant
    representation: Representation = Representation.STICKER2
    n_tuples: int = 60
    tuple_length: int = 7
    network: NetConfig = NetConfig()
    train: TrainConfig = TrainConfig()
    wrap: WrapConfig = WrapConfig()
    eval: EvalPlan = field(default_factory=EvalPlan)

    def to_dict(self) -> dict:
        ev = dataclasses.asdict(self.eval)
        ev["iterations"], ev["n_sym"] = list(ev["iterations"]), list(ev["n_sym"])
        return {
            "name": self.name,
            "size": self.variant.size.value,
            "metric": self.variant.metric.value,
            "representation": self.representation.value,
            "n_tuples": self.n_tuples,
            "tuple_length": self.tuple_length,
            "network": self.network.to_dict(),
            "train": self.train.to_dict(),
            "wrap": dataclasses.asdict(self.wrap),
            "eval": ev,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        allowed = {"name", "size", "metric", "representation", "n_tuples", "tuple_length",
                   "network", "train", "wrap", "eval"}
        extra = set(d) - allowed
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        for key in ("size", "metric"):
            if key not in d:
                raise ValueError(f"config needs {key!r}")
        wrap = dict(d.get("wrap", {}))
        bad = set(wrap) - {f.name for f in dataclasses.fields(WrapConfig)}
        if bad:
            raise ValueError(f"unknown wrap config keys: {sorted(bad)}")
        ev = dict(d.get("eval", {}))
        bad = set(ev) - {f.name for f in dataclasses.fields(EvalPlan)}
        if bad:
            raise ValueError(f"unknown eval config keys: {sorted(bad)}")
        for k in ("iterations", "n_sym"):
            if k in ev:
                ev[k] = tuple(ev[k])
        return cls(
            name=d.get("name", "custom"),
            variant=CubeVariant.from_names(d["size"], d["metric"]),
            representation=Representation(d.get("representation", "sticker2")),
            n_tuples=int(d.get("n_tuples", 60)),
            tuple_length=int(d.get("tuple_length", 7)),
            network=NetConfig.from_dict(d.get("network", {})),
            train=TrainConfig.from_dict(d.get("train", {})),
            wrap=WrapConfig(**wrap),
            eval=EvalPlan(**ev),
        )

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _preset(name, size, metric, tuples, p_max, e_train, n_sym=0, eval_p=None):
    return RunConfig(
        name=name,
        variant=CubeVariant.from_names(size, metric),
        n_tuples=tuples,
        network=NetConfig(n_sym=n_sym),
        train=TrainConfig(p_max=p_max, e_train=e_train, episodes=3_000_000),
        eval=EvalPlan(p_max=eval_p or p_max, n_sym=(n_sym,),
                      iterations=(0, 100) if size == "pocket2" else (0, 100, 800)),
    )


PRESETS = {p.name: p for p in [
    _preset("TCL4-p13-ET16-3000k-60-7t", "pocket2", "htm", 60, 13, 16, eval_p=13),
    _preset("TCL4-p16-ET20-3000k-60-7t", "pocket2", "qtm", 60, 16, 20, eval_p=14),
    _preset("TCL4-p9-ET13-3000k-120-7t", "rubiks3", "htm", 120, 9, 13),
    _preset("TCL4-p13-ET16-3000k-120-7t", "rubiks3", "qtm", 120, 13, 16, eval_p=15),
    _preset("TCL4-p13-ET16-3000k-120-7t-nsym08", "rubiks3", "qtm", 120, 13, 16, 8, 15),
    _preset("TCL4-p13-ET16-3000k-120-7t-nsym16", "rubiks3", "qtm", 120, 13, 16, 16, 15),
    _preset("TCL4-p13-ET16-3000k-120-7t-nsym24", "rubiks3", "qtm", 120, 13, 16, 24, 15),
]}


def load_config(ref: str) -> RunConfig:
    """A preset name or a path to a JSON config file."""
    if ref in PRESETS:
        return PRESETS[ref]
    path = Path(ref)
    if not path.exists():
        raise FileNotFoundError(f"{ref!r} is neither a preset ({', '.join(PRESETS)}) nor a file")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ValueError(f"{ref}: {e}") from None
    if not isinstance(data, dict):
        raise ValueError(f"{ref}: config must be a JSON object")
    base = data.pop("preset", None)
    if base is not None:
        if base not in PRESETS:
            raise ValueError(f"unknown preset {base!r}")
        merged = PRESETS[base].to_dict()
        for k, v in data.items():
            merged[k] = {**merged[k], **v} if isinstance(v, dict) and isinstance(merged.get(k), dict) else v
        data = merged
    return RunConfig.from_dict(data)
