"""Cube states and the pure operations on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from . import geometry, tables
from .algebra import N_WCR, Kind, Transform, color_trafo, cube_tables, invert, twist, wcr
from .variant import CubeVariant, Size


class CorruptStateError(ValueError):
    """A state that no whole-cube rotation or cubie lookup can explain."""


class VariantMismatchError(ValueError):
    pass


SizeLike = Union[Size, CubeVariant]


def _size(x: SizeLike) -> Size:
    return x.size if isinstance(x, CubeVariant) else x


def _ro(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CubeState:
    """fcol: color per location; sloc: location per sticker.

    ``centers`` holds the center color of each face (U L F D R B) and is only
    present for the 3x3x3, where it fixes the cube's orientation.
    """

    size: Size
    fcol: np.ndarray
    sloc: np.ndarray
    centers: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "fcol", _ro(self.fcol))
        object.__setattr__(self, "sloc", _ro(self.sloc))
        if self.centers is not None:
            object.__setattr__(self, "centers", _ro(self.centers))

    def key(self) -> bytes:
        return self.fcol.astype(np.uint8).tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, CubeState):
            return NotImplemented
        return self.size is other.size and np.array_equal(self.fcol, other.fcol)

    def __hash__(self) -> int:
        return hash((self.size, self.key()))

    def __repr__(self) -> str:
        return f"CubeState({self.size.value}, fcol={''.join(map(str, self.fcol))})"

    def __str__(self) -> str:
        return render(self)


def default_cube(variant: SizeLike) -> CubeState:
    size = _size(variant)
    t = cube_tables(size)
    centers = np.arange(6) if size is Size.RUBIKS3 else None
    return CubeState(size, t.default_fcol, np.arange(t.n), centers)


def state_from_sloc(variant: SizeLike, sloc) -> CubeState:
    """Rebuild a state from its sticker locations (centers at home)."""
    size = _size(variant)
    t = cube_tables(size)
    sloc = np.asarray(sloc, dtype=np.int64)
    fcol = np.empty(t.n, dtype=np.int64)
    fcol[sloc] = t.default_fcol
    return CubeState(size, fcol, sloc, np.arange(6) if size is Size.RUBIKS3 else None)


def _check(state: CubeState, t: Transform) -> None:
    if state.size is not t.size:
        raise VariantMismatchError(f"{t} does not act on a {state.size.value} cube")


def _apply_arrays(fcol, sloc, centers, t: Transform):
    """Apply ``t`` to arrays with arbitrary leading batch dimensions."""
    if t.kind is Kind.COLOR:
        fcol = t.color_map[fcol]
        sloc = sloc[..., t.forward]
        if centers is not None:
            centers = t.color_map[centers]
        return fcol, sloc, centers
    fcol = fcol[..., t.inverse]
    sloc = t.forward[sloc]
    if centers is not None and t.kind is Kind.WCR:
        faces = cube_tables(t.size).wcr_faces[t.key]
        centers = centers[..., invert(faces)]
    return fcol, sloc, centers


def apply_transform(state: CubeState, t: Transform) -> CubeState:
    _check(state, t)
    return CubeState(state.size, *_apply_arrays(state.fcol, state.sloc, state.centers, t))


def apply_moves(state: CubeState, moves: Sequence) -> CubeState:
    """Apply twists given as :class:`Action` objects."""
    for a in moves:
        state = apply_transform(state, twist(state.size, a))
    return state


def invert_sloc(state: CubeState) -> np.ndarray:
    return invert(state.sloc)


@lru_cache(maxsize=None)
def _pocket_norm_lookup() -> dict:
    # rotation k brings locations (a, b) to (12, 16)
    w = cube_tables(Size.POCKET2).wcr
    return {(int(invert(w[k])[12]), int(invert(w[k])[16])): k for k in range(N_WCR)}


@lru_cache(maxsize=None)
def _rubiks_norm_lookup() -> dict:
    faces = cube_tables(Size.RUBIKS3).wcr_faces
    return {(int(faces[k, 0]), int(faces[k, 1])): k for k in range(N_WCR)}


def normalizing_key(state: CubeState) -> int:
    """Key of the whole-cube rotation that brings ``state`` into normal position."""
    if state.size is Size.POCKET2:
        k = _pocket_norm_lookup().get((int(state.sloc[12]), int(state.sloc[16])))
    else:
        if state.centers is None:
            raise CorruptStateError("3x3x3 state without center colors")
        k = _rubiks_norm_lookup().get((int(state.centers[0]), int(state.centers[1])))
        if k is not None and not np.array_equal(cube_tables(state.size).wcr_faces[k],
                                                state.centers):
            k = None
    if k is None:
        raise CorruptStateError("no whole-cube rotation normalizes this state")
    return k


def normalize(state: CubeState) -> CubeState:
    k = normalizing_key(state)
    return state if k == 0 else apply_transform(state, wcr(state.size, k))


def color_transform(state: CubeState, ct_key: int) -> CubeState:
    return normalize(apply_transform(state, color_trafo(state.size, ct_key)))


def symmetric_set(state: CubeState, n_sym: int, rng: np.random.Generator) -> list:
    if not 0 <= n_sym <= N_WCR:
        raise ValueError(f"n_sym must be in 0..24, got {n_sym}")
    if n_sym <= 1:
        return [state]
    keys = rng.choice(np.arange(1, N_WCR), size=n_sym - 1, replace=False)
    return [state] + [color_transform(state, int(k)) for k in keys]


def count_distinct_symmetries(state: CubeState) -> int:
    return len({color_transform(state, k) for k in range(N_WCR)})


def is_solved(state: CubeState) -> bool:
    return bool(np.array_equal(state.fcol, cube_tables(state.size).default_fcol))


def _locate_sets(size: Size):
    if size is Size.POCKET2:
        return tables.POCKET_LOCATE, ()
    return tables.RUBIKS_LOCATE_CORNERS, tables.RUBIKS_LOCATE_EDGES


def reconstruct_sloc(fcol: np.ndarray, variant: SizeLike) -> np.ndarray:
    """Rebuild the sticker locations from face colors alone."""
    size = _size(variant)
    fcol = np.asarray(fcol)
    dcol = cube_tables(size).default_fcol
    R = geometry.right_neighbor(size)
    corners, edges = _locate_sets(size)
    corner_locs = [s for c in geometry.cubies(size) if len(c) == 3 for s in c]
    edge_locs = [s for c in geometry.cubies(size) if len(c) == 2 for s in c]
    sloc = np.full(len(dcol), -1, dtype=np.int64)
    for s in corners:
        ring = (s, R[s], R[R[s]])
        want = dcol[list(ring)]
        for a in corner_locs:
            if fcol[a] == want[0] and fcol[R[a]] == want[1] and fcol[R[R[a]]] == want[2]:
                sloc[list(ring)] = (a, R[a], R[R[a]])
                break
        else:
            raise CorruptStateError(f"corner cubie of sticker {s} not found")
    for s in edges:
        want = (dcol[s], dcol[R[s]])
        for a in edge_locs:
            if fcol[a] == want[0] and fcol[R[a]] == want[1]:
                sloc[[s, R[s]]] = (a, R[a])
                break
        else:
            raise CorruptStateError(f"edge cubie of sticker {s} not found")
    if (sloc < 0).any() or len(set(sloc.tolist())) != len(sloc):
        raise CorruptStateError("reconstructed sloc is not a permutation")
    return sloc


def scramble(variant: CubeVariant, p: int, rng: np.random.Generator):
    """Apply ``p`` uniformly drawn actions to the solved cube.

    Returns ``(state, action_indices)``.  Cancelling pairs are not filtered.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    seq = rng.integers(0, len(variant.actions), size=p)
    acts = variant.actions
    state = apply_moves(default_cube(variant), [acts[i] for i in seq])
    return normalize(state), [int(i) for i in seq]


def render(state: CubeState) -> str:
    """Flattened net; each cell shows the face color letter and the sticker there."""
    net = tables.POCKET_NET if state.size is Size.POCKET2 else tables.RUBIKS_NET
    n = state.size.edge
    where = invert(state.sloc)
    centers = state.centers if state.centers is not None else np.arange(6)

    def cell(face: str, s) -> str:
        if s is None:
            return f"[{tables.COLOR_LETTERS[centers[tables.FACES.index(face)]]}]"
        return f"{tables.COLOR_LETTERS[state.fcol[s]]}{where[s]:<2d}"

    blank = " " * (4 * n)
    lines = []
    for r in range(n):
        lines.append(blank + " ".join(cell("U", s).ljust(3) for s in net["U"][r]))
    for r in range(n):
        lines.append("  ".join(" ".join(cell(f, s).ljust(3) for s in net[f][r]) for f in "LFRB"))
    for r in range(n):
        lines.append(blank + " ".join(cell("D", s).ljust(3) for s in net["D"][r]))
    return "\n".join(line.rstrip() for line in lines)
