"""Training loops: full-episode TD(0) and the one-step DAVI-style variant."""

from __future__ import annotations

import csv
import dataclasses
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .cube import CubeState, apply_moves, normalize
from .network import NTupleSystem
from .rng import stream


@dataclass(frozen=True)
class TrainConfig:
    p_max: int = 16
    episodes: int = 3_000_000
    e_train: int = 20
    seed: int = 42
    mode: str = "episode"            # or "davi"
    chunk: int = 10_000              # episodes per compiled call
    eval_interval: int = 0           # 0: no learning curve
    eval_cubes: int = 200
    e_eval: int = 50
    davi_batch: int = 100
    davi_check_interval: int = 100
    davi_loss_threshold: float = 0.05

    def __post_init__(self):
        if self.p_max < 1 or self.episodes < 0:
            raise ValueError("need p_max >= 1 and episodes >= 0")
        if self.mode not in ("episode", "davi"):
            raise ValueError(f"unknown training mode {self.mode!r}")
        if self.mode == "episode" and self.e_train < self.p_max + 3:
            raise ValueError("e_train must be at least p_max + 3")
        if self.chunk < 1 or self.davi_batch < 1 or self.davi_check_interval < 1:
            raise ValueError("chunk, davi_batch and davi_check_interval must be positive")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown training config keys: {sorted(extra)}")
        return cls(**d)


@dataclass
class TrainLog:
    p: np.ndarray
    solved: np.ndarray
    steps: np.ndarray
    wall: np.ndarray                 # seconds since start, at the end of each chunk
    curve: list = field(default_factory=list)
    losses: list = field(default_factory=list)
    refreshes: list = field(default_factory=list)
    updates: int = 0

    def write_records(self, path) -> None:
        with open(path, "w") as f:
            for i in range(len(self.p)):
                f.write(json.dumps({"episode": i, "p": int(self.p[i]), "solved": bool(self.solved[i]),
                                    "steps": int(self.steps[i]), "wall": round(float(self.wall[i]), 4)}))
                f.write("\n")

    def write_curve(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.DictWriter(f, ["episodes_done", "p", "solved_rate", "n_sym", "seed"])
            w.writeheader()
            w.writerows(self.curve)

    def interval_rates(self, width: int) -> list:
        """Solved fraction of training episodes per block of ``width`` episodes."""
        return [float(self.solved[i:i + width].mean()) for i in range(0, len(self.solved), width)]


@dataclass
class TrainResult:
    network: NTupleSystem
    log: TrainLog


def _learning_curve(net, config, done, log):
    from .mcts import WrapConfig, evaluate
    for p in range(1, config.p_max + 1):
        res = evaluate(net, p, config.eval_cubes, config.e_eval, WrapConfig(iterations=0),
                       net.config.n_sym, config.seed)
        log.curve.append({"episodes_done": done, "p": p, "solved_rate": res.solved_rate,
                          "n_sym": net.config.n_sym, "seed": config.seed})


def train(config: TrainConfig, net: NTupleSystem, progress=None) -> TrainResult:
    if config.mode == "davi":
        return train_davi_style(config, net, progress)
    M = config.episodes
    log = TrainLog(np.zeros(M, np.int32), np.zeros(M, np.bool_), np.zeros(M, np.int32), np.zeros(M))
    rs, rsym, rtie = (stream(config.seed, n) for n in ("scramble", "symmetry", "tiebreak"))
    ws, prm = net.new_work(), net.params()
    knet = net.net
    t0 = time.perf_counter()
    done = 0
    while done < M:
        n = min(config.chunk, M - done)
        if config.eval_interval:
            n = min(n, config.eval_interval - done % config.eval_interval)
        sl = slice(done, done + n)
        K.train_episodes(net.puzzle, knet, net.board, prm, n, config.p_max, config.e_train,
                         net.config.n_sym, float(net.config.epsilon), rs, rsym, rtie, ws,
                         log.p[sl], log.solved[sl], log.steps[sl])
        done += n
        log.wall[sl] = time.perf_counter() - t0
        if config.eval_interval and done % config.eval_interval == 0:
            _learning_curve(net, config, done, log)
        if progress:
            progress(done, M, log)
    # exploratory moves are not learned from; with epsilon = 0 every step is an update
    log.updates = int(log.steps.sum()) if net.config.epsilon == 0 else -1
    return TrainResult(net, log)


def train_davi_style(config: TrainConfig, net: NTupleSystem, progress=None) -> TrainResult:
    """One-step targets from a frozen copy; ``episodes`` counts batches.

    The frozen weights are refreshed at every ``davi_check_interval``-th batch
    whose mean loss over the interval is below ``davi_loss_threshold``.
    """
    rs, rsym = stream(config.seed, "scramble"), stream(config.seed, "symmetry")
    ws, prm = net.new_work(), net.params()
    knet = net.net
    frozen_w = net.w.copy()
    frozen = net.frozen_net(frozen_w)
    B = config.davi_batch
    states = np.zeros((B, net.puzzle.wcr.shape[1]), np.int64)
    targets = np.zeros(B)
    M = config.episodes
    log = TrainLog(np.zeros(0, np.int32), np.zeros(0, np.bool_), np.zeros(0, np.int32), np.zeros(M))
    t0 = time.perf_counter()
    window = []
    for m in range(1, M + 1):
        loss, used = K.davi_batch(net.puzzle, knet, frozen, net.board, prm, B, config.p_max,
                                  net.config.n_sym, rs, rsym, ws, states, targets)
        log.updates += used
        log.losses.append(float(loss))
        window.append(loss)
        if m % config.davi_check_interval == 0:
            if float(np.mean(window)) < config.davi_loss_threshold:
                frozen_w[:] = net.w
                log.refreshes.append(m)
            window = []
        log.wall[m - 1] = time.perf_counter() - t0
        if config.eval_interval and (m * B) % config.eval_interval < B:
            _learning_curve(net, config, m * B, log)
        if progress:
            progress(m, M, log)
    return TrainResult(net, log)


def greedy_step(state: CubeState, net: NTupleSystem, n_sym: int, rng: np.random.Generator):
    """(action index, next state, value) of the best successor; random tie-break."""
    if state.size is not net.variant.size:
        raise ValueError("state and network disagree on cube size")
    state = normalize(state)
    out = np.zeros(state.size.sticker_count, np.int64)
    a, v = K.greedy(net.puzzle, net.net, net.board, net.params(), np.array(state.sloc),
                    n_sym, rng, rng, net.new_work(), out)
    return int(a), apply_moves(state, [net.variant.actions[a]]), float(v)
