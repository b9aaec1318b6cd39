"""PUCT tree search over the trained value function, and batch evaluation."""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .cube import CubeVariant, scramble, state_from_sloc
from .network import NTupleSystem
from .rng import stream


@dataclass(frozen=True)
class WrapConfig:
    iterations: int = 100
    c_puct: float = 1.0
    d_max: int = 50                  # -1: unbounded
    eps_ucb: float = 1e-8
    use_softmax: bool = True
    use_last_mcts: bool = True

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.d_max == 0 or self.d_max < -1:
            raise ValueError("d_max must be positive or -1")
        if self.eps_ucb <= 0:
            raise ValueError("eps_ucb must be positive")


class MctsNode:
    __slots__ = ("sloc", "W", "N", "P", "children", "child_sloc", "child_value",
                 "child_solved", "value", "expanded")

    def __init__(self, sloc: np.ndarray):
        self.sloc = sloc
        self.expanded = False

    def state(self, variant: CubeVariant):
        return state_from_sloc(variant, self.sloc)

    @property
    def visits(self) -> int:
        return int(self.N.sum()) if self.expanded else 0


class Searcher:
    """Search state shared across the moves of one evaluation episode."""

    def __init__(self, net: NTupleSystem, wrap: WrapConfig, n_sym: int,
                 rng_sym: np.random.Generator, rng_tie: np.random.Generator):
        self.net, self.wrap, self.n_sym = net, wrap, n_sym
        self.rng_sym, self.rng_tie = rng_sym, rng_tie
        self.knet, self.prm, self.ws = net.net, net.params(), net.new_work()
        self.A = net.puzzle.actions.shape[0]
        self.expansions = 0

    def expand_and_evaluate(self, node: MctsNode) -> float:
        A, n = self.A, node.sloc.shape[0]
        node.child_sloc = np.empty((A, n), np.int64)
        node.child_value = np.empty(A)
        node.child_solved = np.empty(A, np.bool_)
        K.expand(self.net.puzzle, self.knet, self.net.board, self.prm, node.sloc, self.n_sym,
                 self.rng_sym, self.ws, node.child_sloc, node.child_value, node.child_solved)
        v = node.child_value
        if self.wrap.use_softmax:
            e = np.exp(v - v.max())
            node.P = e / e.sum()
        else:
            shifted = v - v.min()
            s = shifted.sum()
            node.P = shifted / s if s > 0 else np.full(A, 1.0 / A)
        node.W = np.zeros(A)
        node.N = np.zeros(A, np.int64)
        node.children = [None] * A
        node.value = float(v.max())
        node.expanded = True
        self.expansions += 1
        return node.value

    def select(self, node: MctsNode) -> int:
        return select_action_ucb(node, self.wrap.c_puct, self.wrap.eps_ucb, self.rng_tie)

    def search(self, root: MctsNode, iterations: int | None = None) -> MctsNode:
        if not root.expanded:
            self.expand_and_evaluate(root)
        budget = self.wrap.iterations if iterations is None else iterations
        d_max = self.wrap.d_max
        cost, gamma = self.prm.cost, self.prm.gamma
        for _ in range(budget):
            path = []
            node, depth = root, 0
            while True:
                a = self.select(node)
                path.append((node, a))
                if node.child_solved[a]:
                    q = float(node.child_value[a])
                    break
                child = node.children[a]
                if child is None:
                    child = node.children[a] = MctsNode(node.child_sloc[a])
                depth += 1
                if not child.expanded:
                    q = cost + gamma * self.expand_and_evaluate(child)
                    break
                if d_max != -1 and depth >= d_max:
                    q = cost + gamma * child.value
                    break
                node = child
            # each edge is worth one step cost plus the discounted value beyond it
            for nd, a in reversed(path):
                nd.W[a] += q
                nd.N[a] += 1
                q = cost + gamma * q
        return root

    def best_action(self, root: MctsNode) -> int:
        """Most visited; ties by higher W/N, then at random."""
        N = root.N
        q = np.where(N > 0, root.W / np.maximum(N, 1), -np.inf)
        cand = np.flatnonzero(N == N.max())
        cand = cand[q[cand] == q[cand].max()]
        return int(cand[0] if len(cand) == 1 else cand[self.rng_tie.integers(len(cand))])


def select_action_ucb(node: MctsNode, c_puct: float, eps_ucb: float,
                      rng: np.random.Generator) -> int:
    N = node.N
    q = np.where(N > 0, node.W / np.maximum(N, 1), 0.0)
    score = q + c_puct * node.P * math.sqrt(eps_ucb + N.sum()) / (1.0 + N)
    cand = np.flatnonzero(score == score.max())
    return int(cand[0] if len(cand) == 1 else cand[rng.integers(len(cand))])


def search(root_state, net: NTupleSystem, wrap: WrapConfig, n_sym: int = 0,
           rng: np.random.Generator | None = None) -> MctsNode:
    rng = rng or np.random.default_rng(0)
    root = MctsNode(np.array(net._sloc(root_state)))
    if K.is_solved(root.sloc):
        raise ValueError("root state is already solved")
    Searcher(net, wrap, n_sym, rng, rng).search(root)
    return root


@dataclass
class CubeRecord:
    p: int
    scramble: str
    solved: bool
    moves: int
    expansions: int
    time_ms: float
    solution: str = ""


@dataclass
class EvalResult:
    p: int
    iterations: int
    n_sym: int
    records: list = field(default_factory=list)

    @property
    def solved_rate(self) -> float:
        return sum(r.solved for r in self.records) / len(self.records) if self.records else 0.0

    @property
    def mean_moves(self) -> float:
        return float(np.mean([r.moves for r in self.records])) if self.records else 0.0

    @property
    def mean_time_ms(self) -> float:
        return float(np.mean([r.time_ms for r in self.records])) if self.records else 0.0


def eval_cubes(variant: CubeVariant, p: int, count: int, seed: int):
    """The evaluation sample for ``p``: depends only on (seed, p), not on the agent."""
    if p < 1:
        raise ValueError("p must be >= 1")
    rng = stream(seed, "eval", p)
    return [scramble(variant, p, rng) for _ in range(count)]


def play(net: NTupleSystem, sloc: np.ndarray, e_eval: int, searcher: Searcher):
    """Solve one cube with the wrapper; returns (solved, actions played)."""
    root = MctsNode(np.array(sloc, np.int64))
    moves = []
    while not K.is_solved(root.sloc) and len(moves) < e_eval:
        searcher.search(root)
        a = searcher.best_action(root)
        moves.append(a)
        if root.child_solved[a]:
            return True, moves
        child = root.children[a]
        if child is None or not searcher.wrap.use_last_mcts:
            child = MctsNode(root.child_sloc[a].copy())
        root = child
    return bool(K.is_solved(root.sloc)), moves


def evaluate(net: NTupleSystem, p: int, batch: int, e_eval: int, wrap: WrapConfig,
             n_sym: int, seed: int, keep_solutions: bool = False) -> EvalResult:
    if e_eval < 1 or batch < 1:
        raise ValueError("need e_eval >= 1 and batch >= 1")
    cubes = eval_cubes(net.variant, p, batch, seed)
    names = [str(a) for a in net.variant.actions]
    rng_sym, rng_tie = stream(seed, "symmetry", 1, p), stream(seed, "tiebreak", 1, p)
    res = EvalResult(p, wrap.iterations, n_sym)
    if wrap.iterations == 0:
        starts = np.stack([np.array(s.sloc) for s, _ in cubes])
        solved = np.zeros(batch, np.bool_)
        moves = np.zeros(batch, np.int64)
        t0 = time.perf_counter()
        K.greedy_play(net.puzzle, net.net, net.board, net.params(), starts, e_eval, n_sym,
                      rng_sym, rng_tie, net.new_work(), solved, moves)
        per = 1000 * (time.perf_counter() - t0) / batch
        for (s, seq), ok, m in zip(cubes, solved, moves):
            res.records.append(CubeRecord(p, " ".join(names[i] for i in seq), bool(ok), int(m), 0, per))
        return res
    for s, seq in cubes:
        searcher = Searcher(net, wrap, n_sym, rng_sym, rng_tie)
        t0 = time.perf_counter()
        ok, moves = play(net, np.array(s.sloc), e_eval, searcher)
        res.records.append(CubeRecord(
            p, " ".join(names[i] for i in seq), ok, len(moves), searcher.expansions,
            1000 * (time.perf_counter() - t0),
            " ".join(names[i] for i in moves) if keep_solutions else ""))
    return res


def write_records(results, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["p", "iterations", "n_sym", "scramble", "solved", "moves", "expansions", "time_ms"])
        for r in results:
            for c in r.records:
                w.writerow([c.p, r.iterations, r.n_sym, c.scramble, int(c.solved), c.moves,
                            c.expansions, f"{c.time_ms:.3f}"])
