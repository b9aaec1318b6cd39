"""Board vectors (CUBESTATE, STICKER2), adjacency sets and random-walk n-tuples."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cube import CorruptStateError, CubeState, CubeVariant, Size
from .cube import geometry, tables


class Representation(enum.Enum):
    CUBESTATE = "cubestate"
    STICKER2 = "sticker2"
    STICKER = "sticker"


class UnsupportedRepresentation(ValueError):
    pass


# Cubie letters as integers.  The 2x2x2 omits e, the DRB cubie, which never moves.
POCKET_CORNERS = "abcdfgh"
RUBIKS_CORNERS = "abcdefgh"
RUBIKS_EDGES = "ABCDEFGHIJKL"


@dataclass(frozen=True)
class BoardVector:
    values: np.ndarray
    position_counts: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.position_counts.shape:
            raise ValueError("values and position_counts differ in length")
        if ((self.values < 0) | (self.values >= self.position_counts)).any():
            raise ValueError("board value outside its cell's range")


@dataclass(frozen=True, eq=False)
class BoardLayout:
    """Everything needed to turn ``sloc`` into a board vector.

    STICKER2 cell k reads sticker ``cell_sticker[k]`` and maps its location
    through ``cell_table[k]``.  CUBESTATE copies fcol and has no tables.
    """

    representation: Representation
    size: Size
    radices: np.ndarray
    cell_sticker: np.ndarray
    cell_table: np.ndarray
    adjacency: tuple

    @property
    def cells(self) -> int:
        return len(self.radices)

    def encode(self, state: CubeState) -> BoardVector:
        if state.size is not self.size:
            raise ValueError(f"state is {state.size.value}, board is {self.size.value}")
        if self.representation is Representation.CUBESTATE:
            return BoardVector(state.fcol.copy(), self.radices)
        values = self.cell_table[np.arange(self.cells), state.sloc[self.cell_sticker]]
        if (values < 0).any():
            raise CorruptStateError("tracked sticker at a location outside the STICKER2 table")
        return BoardVector(values, self.radices)


def _corner_row(loc_step: int, letters: str, n: int, use_face_id: bool) -> np.ndarray:
    row = np.full(n, -1, dtype=np.int64)
    for i, (letter, fid) in enumerate(zip(tables.CORNER_LETTERS, tables.CORNER_FACE_IDS)):
        if letter in letters:
            row[i * loc_step] = fid - 1 if use_face_id else letters.index(letter)
    return row


def _edge_row(use_face_id: bool) -> np.ndarray:
    row = np.full(48, -1, dtype=np.int64)
    for i, (letter, fid) in enumerate(zip(tables.EDGE_LETTERS, tables.EDGE_FACE_IDS)):
        row[2 * i + 1] = fid - 1 if use_face_id else RUBIKS_EDGES.index(letter)
    return row


def _sticker2(size: Size):
    if size is Size.POCKET2:
        tracked = list(tables.POCKET_TRACKED)
        letter_row = _corner_row(1, POCKET_CORNERS, 24, False)
        face_row = _corner_row(1, POCKET_CORNERS, 24, True)
        k = len(tracked)
        sticker = np.array(tracked * 2)
        table = np.stack([letter_row] * k + [face_row] * k)
        radices = np.array([7] * k + [3] * k)
        everything = frozenset(range(2 * k))
        adjacency = tuple(everything - {c} for c in range(2 * k))
        return radices, sticker, table, adjacency
    corners = list(tables.RUBIKS_TRACKED_CORNERS)
    edges = list(tables.RUBIKS_TRACKED_EDGES)
    sticker = np.array(corners * 2 + edges * 2)
    table = np.stack([_corner_row(2, RUBIKS_CORNERS, 48, False)] * 8
                     + [_corner_row(2, RUBIKS_CORNERS, 48, True)] * 8
                     + [_edge_row(False)] * 12 + [_edge_row(True)] * 12)
    radices = np.array([8] * 8 + [3] * 8 + [12] * 12 + [2] * 12)
    s1, s2 = frozenset(range(16)), frozenset(range(16, 40))
    adjacency = tuple((s1 if c < 16 else s2) - {c} for c in range(40))
    return radices, sticker, table, adjacency


@lru_cache(maxsize=None)
def board_layout(representation: Representation, size: Size) -> BoardLayout:
    representation = Representation(representation)
    if representation is Representation.STICKER:
        raise UnsupportedRepresentation(
            "STICKER (one-hot) is not implemented; use STICKER2 or CUBESTATE")
    if representation is Representation.CUBESTATE:
        n = size.sticker_count
        adjacency = tuple(frozenset(nb) for nb in geometry.sticker_neighbors(size))
        empty = np.zeros(0, dtype=np.int64)
        layout = (np.full(n, 6, dtype=np.int64), empty, empty.reshape(0, n), adjacency)
    else:
        layout = _sticker2(size)
    radices, sticker, table, adjacency = layout
    for a in (radices, sticker, table):
        a.setflags(write=False)
    return BoardLayout(representation, size, radices.astype(np.int64),
                       sticker.astype(np.int64), table.astype(np.int64), adjacency)


def to_cubestate_bv(state: CubeState) -> BoardVector:
    return board_layout(Representation.CUBESTATE, state.size).encode(state)


def to_sticker2_bv(state: CubeState) -> BoardVector:
    return board_layout(Representation.STICKER2, state.size).encode(state)


def _size_of(variant) -> Size:
    return variant.size if isinstance(variant, CubeVariant) else variant


def adjacency_set(representation: Representation, variant, cell: int) -> frozenset:
    layout = board_layout(Representation(representation), _size_of(variant))
    if not 0 <= cell < layout.cells:
        raise IndexError(f"cell {cell} outside board of {layout.cells} cells")
    return layout.adjacency[cell]


@dataclass(frozen=True)
class NTupleDef:
    cells: tuple
    radices: tuple

    def __post_init__(self):
        if len(self.cells) != len(self.radices) or len(self.cells) < 1:
            raise ValueError("cells and radices must be non-empty and equally long")
        if len(set(self.cells)) != len(self.cells):
            raise ValueError(f"duplicate cells in tuple {self.cells}")

    @property
    def lut_size(self) -> int:
        return int(np.prod(self.radices, dtype=object))

    def index(self, values: np.ndarray) -> int:
        """Mixed-radix LUT index, first cell most significant."""
        idx = 0
        for c, r in zip(self.cells, self.radices):
            idx = idx * r + int(values[c])
        return idx


def is_adjacency_chain(cells, layout: BoardLayout) -> bool:
    reach: set = set()
    for j, c in enumerate(cells):
        if j and c not in reach:
            return False
        reach |= layout.adjacency[c]
    return True


def random_walk_ntuples(count: int, n: int, representation, variant,
                        rng: np.random.Generator, max_restarts: int = 1000) -> list:
    """``count`` tuples of ``n`` distinct cells grown by random walk.

    Each new cell is drawn uniformly from the union of the neighborhoods of
    the cells chosen so far.  A walk that runs out of candidates restarts
    from a fresh start cell.
    """
    if count < 1 or n < 2:
        raise ValueError("need count >= 1 and n >= 2")
    layout = board_layout(Representation(representation), _size_of(variant))
    out = []
    restarts = 0
    while len(out) < count:
        cells = [int(rng.integers(layout.cells))]
        reach = set(layout.adjacency[cells[0]])
        while len(cells) < n:
            cand = sorted(reach.difference(cells))
            if not cand:
                break
            c = cand[int(rng.integers(len(cand)))]
            cells.append(c)
            reach |= layout.adjacency[c]
        if len(cells) < n:
            restarts += 1
            if restarts > max_restarts:
                raise RuntimeError(f"cannot grow {n}-tuples on this board")
            continue
        out.append(NTupleDef(tuple(cells), tuple(int(layout.radices[c]) for c in cells)))
    return out
