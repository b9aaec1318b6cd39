"""Compiled inner loops.

States inside kernels are bare ``sloc`` arrays of normalized cubes, so a
state is solved iff ``sloc`` is the identity.  Twists never break the normal
position (the 2x2x2 uses only U, L, F; 3x3x3 twists never move centers), so
only color transformations need re-normalizing.
"""

from __future__ import annotations

from typing import NamedTuple

import numba as nb
import numpy as np

from .board import BoardLayout, Representation
from .cube import CubeVariant, Size, cube_tables, invert, twist


class Puzzle(NamedTuple):
    actions: np.ndarray      # (A, n) forward twist tables in action order
    wcr: np.ndarray          # (24, n)
    wcr_inv_key: np.ndarray  # (24,)
    pocket: bool
    norm_lookup: np.ndarray  # (n, n) rotation key by (sloc[12], sloc[16]); pocket only


class Board(NamedTuple):
    cubestate: bool
    dcol: np.ndarray
    cell_sticker: np.ndarray
    cell_table: np.ndarray
    cells: int


class Net(NamedTuple):
    cells: np.ndarray    # (T, m) board cells per tuple, padded
    mult: np.ndarray     # (T, m) mixed-radix place values
    lens: np.ndarray     # (T,)
    offsets: np.ndarray  # (T,) start of each tuple's LUT in w
    w: np.ndarray
    tc_n: np.ndarray     # TCL sums, stored relative to tc_init
    tc_a: np.ndarray


class Params(NamedTuple):
    alpha: float
    gamma: float
    cost: float
    r_pos: float
    step_scale: float
    tcl: bool
    tc_init: float
    tc_exp: bool
    tc_beta: float
    acc_delta: bool


class Work(NamedTuple):
    bv: np.ndarray
    idx: np.ndarray      # (24, T)
    keys: np.ndarray
    pool: np.ndarray
    tmp: np.ndarray
    sym: np.ndarray
    child: np.ndarray
    best: np.ndarray
    cur: np.ndarray


def make_puzzle(variant: CubeVariant) -> Puzzle:
    t = cube_tables(variant.size)
    acts = np.stack([twist(variant.size, a).forward for a in variant.actions])
    n = t.n
    lookup = np.full((n, n), -1, dtype=np.int64)
    if variant.size is Size.POCKET2:
        for k in range(24):
            inv = invert(t.wcr[k])
            lookup[inv[12], inv[16]] = k
    return Puzzle(np.ascontiguousarray(acts), np.ascontiguousarray(t.wcr),
                  np.ascontiguousarray(t.wcr_inverse_key),
                  variant.size is Size.POCKET2, lookup)


def make_board(layout: BoardLayout) -> Board:
    n = layout.size.sticker_count
    dcol = np.ascontiguousarray(cube_tables(layout.size).default_fcol)
    if layout.representation is Representation.CUBESTATE:
        return Board(True, dcol, np.zeros(1, np.int64), np.zeros((1, n), np.int64), n)
    return Board(False, dcol, np.ascontiguousarray(layout.cell_sticker),
                 np.ascontiguousarray(layout.cell_table), layout.cells)


def make_work(puzzle: Puzzle, board: Board, n_tuples: int) -> Work:
    n = puzzle.wcr.shape[1]
    z = lambda k: np.zeros(k, dtype=np.int64)  # noqa: E731
    return Work(z(board.cells), np.zeros((24, max(n_tuples, 1)), np.int64), z(24), z(23),
                z(n), z(n), z(n), z(n), z(n))


# --- cube ------------------------------------------------------------------------

@nb.njit(cache=True, inline="always")
def is_solved(sl):
    for i in range(sl.shape[0]):
        if sl[i] != i:
            return False
    return True


@nb.njit(cache=True, inline="always")
def apply_perm(perm, sl, out):
    for i in range(sl.shape[0]):
        out[i] = perm[sl[i]]


@nb.njit(cache=True)
def color_transform(pz, sl, k, tmp, out):
    T = pz.wcr[k]
    for i in range(sl.shape[0]):
        tmp[i] = sl[T[i]]
    if pz.pocket:
        w = pz.norm_lookup[tmp[12], tmp[16]]
    else:
        w = pz.wcr_inv_key[k]
    W = pz.wcr[w]
    for i in range(sl.shape[0]):
        out[i] = W[tmp[i]]


@nb.njit(cache=True)
def scramble_into(pz, p, rng, out):
    for i in range(out.shape[0]):
        out[i] = i
    A = pz.actions.shape[0]
    for _ in range(p):
        a = rng.integers(0, A)
        perm = pz.actions[a]
        for i in range(out.shape[0]):
            out[i] = perm[out[i]]


# --- values ------------------------------------------------------------------------

@nb.njit(cache=True)
def encode(bd, sl, bv):
    if bd.cubestate:
        for i in range(sl.shape[0]):
            bv[sl[i]] = bd.dcol[i]
    else:
        for k in range(bd.cells):
            bv[k] = bd.cell_table[k, sl[bd.cell_sticker[k]]]


@nb.njit(cache=True)
def active(net, bv, idx):
    for t in range(net.lens.shape[0]):
        s = net.offsets[t]
        for j in range(net.lens[t]):
            s += bv[net.cells[t, j]] * net.mult[t, j]
        idx[t] = s


@nb.njit(cache=True)
def raw_value(net, bd, sl, ws, row):
    encode(bd, sl, ws.bv)
    idx = ws.idx[row]
    active(net, ws.bv, idx)
    v = 0.0
    for t in range(net.lens.shape[0]):
        v += net.w[idx[t]]
    return v


@nb.njit(cache=True)
def draw_keys(rng, m, ws):
    # keys[1:m] are distinct non-identity color transformations
    for i in range(23):
        ws.pool[i] = i + 1
    ws.keys[0] = 0
    for j in range(1, m):
        r = (j - 1) + rng.integers(0, 23 - (j - 1))
        tmp = ws.pool[j - 1]
        ws.pool[j - 1] = ws.pool[r]
        ws.pool[r] = tmp
        ws.keys[j] = ws.pool[j - 1]


@nb.njit(cache=True)
def sym_value(pz, net, bd, sl, n_sym, rng, ws):
    if n_sym <= 1:
        return raw_value(net, bd, sl, ws, 0)
    draw_keys(rng, n_sym, ws)
    v = raw_value(net, bd, sl, ws, 0)
    for j in range(1, n_sym):
        color_transform(pz, sl, ws.keys[j], ws.tmp, ws.sym)
        v += raw_value(net, bd, ws.sym, ws, j)
    return v / n_sym


@nb.njit(cache=True)
def child_value(pz, net, bd, prm, child, n_sym, rng, ws):
    if is_solved(child):
        return prm.cost + prm.r_pos, True
    return prm.cost + prm.gamma * sym_value(pz, net, bd, child, n_sym, rng, ws), False


# --- learning ------------------------------------------------------------------------

@nb.njit(cache=True, inline="always")
def tcl_factor(prm, n_i, a_i):
    # the seed pads |N_i| as well as A_i, so one-signed streams of either sign stay at 1
    x = (prm.tc_init + abs(n_i)) / (prm.tc_init + a_i)
    if prm.tc_exp:
        return np.exp(prm.tc_beta * (x - 1.0))
    return x


@nb.njit(cache=True)
def td_update(pz, net, bd, prm, sl, target, n_sym, rng, ws):
    """Move V(sl) toward ``target``; returns the TD error used."""
    m = max(n_sym, 1)
    v = sym_value(pz, net, bd, sl, n_sym, rng, ws)
    delta = target - v
    step = prm.alpha * delta * prm.step_scale
    T = net.lens.shape[0]
    for j in range(m):
        for t in range(T):
            i = ws.idx[j, t]
            if prm.tcl:
                net.w[i] += step * tcl_factor(prm, net.tc_n[i], net.tc_a[i])
                acc = delta if prm.acc_delta else step
                net.tc_n[i] += acc
                net.tc_a[i] += abs(acc)
            else:
                net.w[i] += step
    return delta


@nb.njit(cache=True)
def greedy(pz, net, bd, prm, sl, n_sym, rng_sym, rng_tie, ws, out):
    """Best successor of ``sl`` into ``out``; returns (action, value)."""
    best = -np.inf
    besta = -1
    ties = 0
    for a in range(pz.actions.shape[0]):
        apply_perm(pz.actions[a], sl, ws.child)
        v, _ = child_value(pz, net, bd, prm, ws.child, n_sym, rng_sym, ws)
        take = False
        if v > best:
            best = v
            ties = 1
            take = True
        elif v == best:
            ties += 1
            take = rng_tie.integers(0, ties) == 0
        if take:
            besta = a
            out[:] = ws.child
    return besta, best


@nb.njit(cache=True)
def train_episodes(pz, net, bd, prm, n_episodes, p_max, e_train, n_sym, epsilon,
                   rng_scr, rng_sym, rng_tie, ws, out_p, out_solved, out_steps):
    A = pz.actions.shape[0]
    cur = ws.cur
    best = ws.best
    for e in range(n_episodes):
        p = rng_scr.integers(1, p_max + 1)
        scramble_into(pz, p, rng_scr, cur)
        out_p[e] = p
        steps = 0
        solved = is_solved(cur)
        while not solved and steps < e_train:
            a, v = greedy(pz, net, bd, prm, cur, n_sym, rng_sym, rng_tie, ws, best)
            if epsilon > 0.0 and rng_tie.random() < epsilon:
                # exploratory move; no update from random moves
                a = rng_tie.integers(0, A)
                apply_perm(pz.actions[a], cur, best)
            else:
                td_update(pz, net, bd, prm, cur, v, n_sym, rng_sym, ws)
            cur[:] = best
            steps += 1
            solved = is_solved(cur)
        out_solved[e] = solved
        out_steps[e] = steps


@nb.njit(cache=True)
def davi_batch(pz, net, frozen, bd, prm, batch, p_max, n_sym, rng_scr, rng_sym, ws,
               states, targets):
    """One iteration of one-step training; returns (loss, samples used)."""
    A = pz.actions.shape[0]
    used = 0
    loss = 0.0
    for b in range(batch):
        scramble_into(pz, rng_scr.integers(1, p_max + 1), rng_scr, ws.cur)
        if is_solved(ws.cur):
            continue
        y = -np.inf
        for a in range(A):
            apply_perm(pz.actions[a], ws.cur, ws.child)
            v, _ = child_value(pz, frozen, bd, prm, ws.child, n_sym, rng_sym, ws)
            if v > y:
                y = v
        states[used, :] = ws.cur
        targets[used] = y
        # loss is measured before this batch changes the weights
        d = y - sym_value(pz, net, bd, ws.cur, n_sym, rng_sym, ws)
        loss += d * d
        used += 1
    for b in range(used):
        td_update(pz, net, bd, prm, states[b], targets[b], n_sym, rng_sym, ws)
    return (loss / used if used else 0.0), used


@nb.njit(cache=True)
def greedy_play(pz, net, bd, prm, starts, e_eval, n_sym, rng_sym, rng_tie, ws,
                out_solved, out_moves):
    for b in range(starts.shape[0]):
        ws.cur[:] = starts[b]
        moves = 0
        solved = is_solved(ws.cur)
        while not solved and moves < e_eval:
            greedy(pz, net, bd, prm, ws.cur, n_sym, rng_sym, rng_tie, ws, ws.best)
            ws.cur[:] = ws.best
            moves += 1
            solved = is_solved(ws.cur)
        out_solved[b] = solved
        out_moves[b] = moves


@nb.njit(cache=True)
def expand(pz, net, bd, prm, sl, n_sym, rng_sym, ws, children, values, solved):
    for a in range(pz.actions.shape[0]):
        apply_perm(pz.actions[a], sl, children[a])
        v, s = child_value(pz, net, bd, prm, children[a], n_sym, rng_sym, ws)
        values[a] = v
        solved[a] = s
