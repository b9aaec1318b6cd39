"""Exact distances for the 2x2x2 cube by breadth-first enumeration.

BFS runs over an 11,022,480-entry rank space: the Lehmer code of the seven
movable corner cubies times the 3^7 face-ID digits read off the STICKER2
board.  Only 3,674,160 ranks are reachable (orientation is fixed by the
other six).  Exported tables are keyed by the normalized fcol, packed three
bits per sticker into nine bytes.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass, field

import numba as nb
import numpy as np

from . import _kernels as K
from .board import Representation, board_layout
from .cube import CorruptStateError, CubeState, CubeVariant, Metric, Size, cube_tables, normalize

RANKS = math.factorial(7) * 3**7
UNSEEN = 255
MAGIC = b"CUBETDDT"
VERSION = 1


class OracleResourceError(MemoryError):
    def __init__(self, message: str, level_sizes: list):
        super().__init__(message)
        self.level_sizes = level_sizes


@nb.njit(cache=True)
def _rank(bd, sl):
    letters = np.empty(7, np.int64)
    r = 0
    for k in range(7):
        letters[k] = bd.cell_table[k, sl[bd.cell_sticker[k]]]
    for k in range(7):
        smaller = 0
        for j in range(k + 1, 7):
            if letters[j] < letters[k]:
                smaller += 1
        r = r * (7 - k) + smaller
    for k in range(7, 14):
        r = r * 3 + bd.cell_table[k, sl[bd.cell_sticker[k]]]
    return r


@nb.njit(cache=True)
def _expand_level(pz, bd, frontier, dist, depth, out):
    """Mark (empty ``out``) or collect the next level; returns its size."""
    A = pz.actions.shape[0]
    n = frontier.shape[1]
    child = np.empty(n, np.int64)
    cur = np.empty(n, np.int64)
    collect = out.shape[0] > 0
    c = 0
    for i in range(frontier.shape[0]):
        for j in range(n):
            cur[j] = frontier[i, j]
        for a in range(A):
            K.apply_perm(pz.actions[a], cur, child)
            r = _rank(bd, child)
            if collect:
                if dist[r] == 254:
                    dist[r] = depth + 1
                    for j in range(n):
                        out[c, j] = child[j]
                    c += 1
            elif dist[r] == UNSEEN:
                dist[r] = 254
                c += 1
    return c


@nb.njit(cache=True)
def _bellman(pz, bd, states, dist):
    """Counts of (Bellman violations, neighbor pairs more than one apart)."""
    A = pz.actions.shape[0]
    n = states.shape[1]
    cur = np.empty(n, np.int64)
    child = np.empty(n, np.int64)
    bad = 0
    far = 0
    for i in range(states.shape[0]):
        for j in range(n):
            cur[j] = states[i, j]
        d = np.int64(dist[_rank(bd, cur)])
        best = np.int64(255)
        for a in range(A):
            K.apply_perm(pz.actions[a], cur, child)
            dc = np.int64(dist[_rank(bd, child)])
            if dc < best:
                best = dc
            if abs(dc - d) > 1:
                far += 1
        if d > 0 and d != best + 1:
            bad += 1
    return bad, far


def pack_keys(fcol: np.ndarray) -> np.ndarray:
    """(N, 24) colors -> N nine-byte keys, three bits per sticker, big-endian."""
    fcol = np.asarray(fcol).reshape(-1, 24)
    out = np.empty((fcol.shape[0], 9), np.uint8)
    shifts = 3 * np.arange(7, -1, -1, dtype=np.uint32)
    for g in range(3):
        v = (fcol[:, 8 * g:8 * g + 8].astype(np.uint32) << shifts).sum(axis=1, dtype=np.uint32)
        out[:, 3 * g] = v >> 16
        out[:, 3 * g + 1] = (v >> 8) & 0xFF
        out[:, 3 * g + 2] = v & 0xFF
    return out.view("S9").ravel()


def fcol_from_sloc(slocs: np.ndarray) -> np.ndarray:
    dcol = cube_tables(Size.POCKET2).default_fcol
    slocs = np.asarray(slocs).reshape(-1, 24).astype(np.intp)
    fcol = np.empty(slocs.shape, np.uint8)
    np.put_along_axis(fcol, slocs, np.broadcast_to(dcol.astype(np.uint8), slocs.shape), axis=1)
    return fcol


@dataclass
class DistanceTable:
    metric: Metric
    keys: np.ndarray                 # sorted S9
    dist: np.ndarray                 # uint8, aligned with keys
    level_sizes: list
    states: np.ndarray | None = field(default=None, repr=False)    # BFS order, int8 sloc
    by_rank: np.ndarray | None = field(default=None, repr=False)

    @property
    def count(self) -> int:
        return int(self.keys.size)

    @property
    def max_depth(self) -> int:
        return len(self.level_sizes) - 1

    @property
    def variant(self) -> CubeVariant:
        return CubeVariant(Size.POCKET2, self.metric)

    def lookup_keys(self, keys: np.ndarray) -> np.ndarray:
        keys = np.asarray(keys, dtype="S9")
        pos = np.searchsorted(self.keys, keys)
        pos = np.minimum(pos, self.keys.size - 1)
        found = self.keys[pos] == keys
        if not found.all():
            raise CorruptStateError(f"{int((~found).sum())} states not in the distance table")
        return self.dist[pos]

    def lookup_slocs(self, slocs: np.ndarray) -> np.ndarray:
        return self.lookup_keys(pack_keys(fcol_from_sloc(slocs)))

    def check_bellman(self) -> tuple:
        if self.states is None or self.by_rank is None:
            raise RuntimeError("table was imported; rerun bfs_enumerate for this check")
        pz = K.make_puzzle(self.variant)
        bd = K.make_board(board_layout(Representation.STICKER2, Size.POCKET2))
        return _bellman(pz, bd, self.states, self.by_rank)

    def export(self, path) -> None:
        header = struct.pack("<4sIQI", self.metric.value.encode().ljust(4), VERSION,
                             self.count, self.max_depth)
        body = np.empty((self.count, 10), np.uint8)
        body[:, :9] = self.keys.view(np.uint8).reshape(-1, 9)
        body[:, 9] = self.dist
        with open(path, "wb") as f:
            f.write(MAGIC + header)
            f.write(body.tobytes())

    def write_levels(self, path) -> None:
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["depth", "states"])
            for d, n in enumerate(self.level_sizes):
                w.writerow([d, n])


def load_table(path) -> DistanceTable:
    with open(path, "rb") as f:
        data = f.read()
    if data[:8] != MAGIC:
        raise ValueError("not a distance table (bad magic)")
    metric, version, count, max_depth = struct.unpack_from("<4sIQI", data, 8)
    if version != VERSION:
        raise ValueError(f"distance table version {version}, expected {VERSION}")
    body = np.frombuffer(data, np.uint8, offset=8 + 20)
    if body.size != 10 * count:
        raise ValueError("distance table is truncated")
    body = body.reshape(count, 10)
    keys = np.ascontiguousarray(body[:, :9]).view("S9").ravel()
    dist = body[:, 9].copy()
    levels = np.bincount(dist, minlength=max_depth + 1).tolist()
    return DistanceTable(Metric(metric.decode().strip()), keys, dist, levels)


def bfs_enumerate(variant: CubeVariant, max_bytes: int = 1 << 30, progress=None) -> DistanceTable:
    """All normalized states reachable with U, L, F twists, with exact distances."""
    if variant.size is not Size.POCKET2:
        raise ValueError("enumeration is only feasible for the 2x2x2 cube")
    pz = K.make_puzzle(variant)
    bd = K.make_board(board_layout(Representation.STICKER2, Size.POCKET2))
    dist = np.full(RANKS, UNSEEN, np.uint8)
    frontier = np.arange(24, dtype=np.int8)[None, :]
    dist[_rank(bd, np.arange(24))] = 0
    levels = [frontier]
    sizes = [1]
    used = dist.nbytes + frontier.nbytes
    empty = np.zeros((0, 24), np.int8)
    while True:
        depth = len(levels) - 1
        n = _expand_level(pz, bd, frontier, dist, depth, empty)
        if n == 0:
            break
        used += 24 * n
        if used > max_bytes:
            raise OracleResourceError(
                f"memory budget of {max_bytes} bytes exceeded at depth {depth + 1}; "
                f"levels so far {sizes}", sizes)
        out = np.empty((n, 24), np.int8)
        _expand_level(pz, bd, frontier, dist, depth, out)
        frontier = out
        levels.append(out)
        sizes.append(n)
        if progress:
            progress(depth + 1, n)
    states = np.concatenate(levels)
    depth_of = np.repeat(np.arange(len(levels), dtype=np.uint8), sizes)
    step = 1 << 18
    keys = np.concatenate([pack_keys(fcol_from_sloc(states[i:i + step]))
                           for i in range(0, len(states), step)])
    order = np.argsort(keys, kind="stable")
    return DistanceTable(variant.metric, keys[order], depth_of[order], sizes, states, dist)


def exact_distance(state: CubeState, table: DistanceTable) -> int:
    if state.size is not Size.POCKET2:
        raise ValueError("distance tables exist only for the 2x2x2 cube")
    key = pack_keys(normalize(state).fcol[None, :])
    return int(table.lookup_keys(key)[0])


@dataclass
class AuditReport:
    samples: int
    solved: int
    overheads: list                  # solution length minus optimal, solved cubes only

    @property
    def solved_rate(self) -> float:
        return self.solved / self.samples if self.samples else 0.0

    @property
    def mean_overhead(self) -> float:
        return float(np.mean(self.overheads)) if self.overheads else float("nan")

    def percentile(self, q: float) -> float:
        return float(np.percentile(self.overheads, q)) if self.overheads else float("nan")


def optimality_audit(net, wrap, table: DistanceTable, sample_size: int, p: int = 14,
                     seed: int = 0, e_eval: int = 50, n_sym: int = 0) -> AuditReport:
    """Compare agent solution lengths with exact distances on sampled cubes."""
    from .mcts import eval_cubes, evaluate
    if net.variant != table.variant:
        raise ValueError(f"agent is {net.variant}, table is {table.variant}")
    res = evaluate(net, p, sample_size, e_eval, wrap, n_sym, seed)
    cubes = eval_cubes(net.variant, p, sample_size, seed)
    optimal = table.lookup_slocs(np.stack([np.array(s.sloc) for s, _ in cubes]))
    over = [r.moves - int(d) for r, d in zip(res.records, optimal) if r.solved]
    return AuditReport(sample_size, sum(r.solved for r in res.records), over)

