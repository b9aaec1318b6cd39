"""Folding the flattened net into 3D sticker positions.

The positions give cubie membership, sticker neighborhoods and the clockwise
right-neighbor relation used when rebuilding ``sloc`` from ``fcol``.  They are
not used to build the move tables, so the two stay independent checks of each
other.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import tables
from .variant import Size

# outward normal per face, in FACES order (U L F D R B)
NORMALS = np.array([(0, 1, 0), (-1, 0, 0), (0, 0, 1),
                    (0, -1, 0), (1, 0, 0), (0, 0, -1)], dtype=float)


def _net(size: Size) -> dict:
    return tables.POCKET_NET if size is Size.POCKET2 else tables.RUBIKS_NET


def _place(face: str, r: float, c: float, h: float) -> tuple:
    # r, c are centered grid coordinates within the face as drawn in the net
    if face == "U":
        return (c, h, r)
    if face == "D":
        return (c, -h, -r)
    if face == "F":
        return (c, -r, h)
    if face == "L":
        return (-h, -r, c)
    if face == "R":
        return (h, -r, -c)
    return (-c, -r, -h)  # B


@lru_cache(maxsize=None)
def sticker_positions(size: Size) -> np.ndarray:
    """Sticker centers, shape (n_stickers, 3); cube half-width is edge/2."""
    net = _net(size)
    h = size.edge / 2.0
    off = (size.edge - 1) / 2.0
    count = size.sticker_count
    pos = np.full((count, 3), np.nan)
    for face, grid in net.items():
        for r, row in enumerate(grid):
            for c, s in enumerate(row):
                if s is not None:
                    pos[s] = _place(face, r - off, c - off, h)
    assert not np.isnan(pos).any()
    pos.setflags(write=False)
    return pos


@lru_cache(maxsize=None)
def sticker_faces(size: Size) -> np.ndarray:
    pos = sticker_positions(size)
    faces = np.array([int(np.argmax(NORMALS @ p)) for p in pos], dtype=np.int64)
    faces.setflags(write=False)
    return faces


def _cubie_key(p: np.ndarray, size: Size) -> tuple:
    inner = (size.edge - 1) / 2.0
    q = np.clip(p, -inner, inner)
    return tuple(np.round(q * 2).astype(int))


@lru_cache(maxsize=None)
def cubies(size: Size) -> tuple:
    """Sticker groups sharing one cubie, each sorted ascending."""
    groups: dict = {}
    for s, p in enumerate(sticker_positions(size)):
        groups.setdefault(_cubie_key(p, size), []).append(s)
    return tuple(tuple(sorted(g)) for g in sorted(groups.values()))


@lru_cache(maxsize=None)
def right_neighbor(size: Size) -> np.ndarray:
    """R[s]: next sticker clockwise around s's corner cubie (seen from outside).

    Edge stickers map to their partner; this is the O[s] relation for edges.
    """
    pos = sticker_positions(size)
    faces = sticker_faces(size)
    R = np.full(len(pos), -1, dtype=np.int64)
    for group in cubies(size):
        if len(group) == 2:
            a, b = group
            R[a], R[b] = b, a
            continue
        corner = np.sign(pos[group[0]] + pos[group[1]] + pos[group[2]])
        for s in group:
            for t in group:
                if t == s:
                    continue
                turn = np.cross(NORMALS[faces[s]], NORMALS[faces[t]]) @ corner
                if turn < 0:
                    R[s] = t
    assert (R >= 0).all()
    R.setflags(write=False)
    return R


@lru_cache(maxsize=None)
def sticker_neighbors(size: Size) -> tuple:
    """Stickers sharing an edge on the cube surface, per sticker."""
    pos = sticker_positions(size)
    faces = sticker_faces(size)
    out = []
    for s, p in enumerate(pos):
        nb = []
        for t, q in enumerate(pos):
            if t == s:
                continue
            if faces[t] == faces[s]:
                if np.isclose(np.abs(p - q).sum(), 1.0):
                    nb.append(t)
            elif np.allclose(p - q, 0.5 * (NORMALS[faces[s]] - NORMALS[faces[t]])):
                nb.append(t)
        out.append(tuple(nb))
    return tuple(out)
