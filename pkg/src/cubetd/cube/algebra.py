"""Derived transformation tables: twists, whole-cube rotations, color maps.

Composition is written first-trafo-first: ``compose(a, b)`` means "first a,
then b", so the composite forward table is ``b[a]``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import tables
from .variant import Action, Size

N_WCR = 24
# key // 4 selects the leading rotation, key % 4 the trailing power of u
WCR_ROW_LABELS = ("id", "f", "f2", "f3", "l", "l3")


class Kind(enum.Enum):
    TWIST = "twist"
    WCR = "wcr"
    COLOR = "color"


def compose(*perms: np.ndarray) -> np.ndarray:
    out = np.arange(len(perms[0]))
    for p in perms:
        out = np.asarray(p)[out]
    return out


def invert(perm: np.ndarray) -> np.ndarray:
    perm = np.asarray(perm)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return inv


def power(perm: np.ndarray, k: int) -> np.ndarray:
    return compose(*([perm] * k)) if k > 0 else np.arange(len(perm))


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Transform:
    forward: np.ndarray
    inverse: np.ndarray
    kind: Kind
    size: Size
    key: int = -1
    action: Optional[Action] = None
    color_map: Optional[np.ndarray] = None

    @property
    def label(self) -> str:
        if self.kind is Kind.TWIST:
            return str(self.action)
        return f"{self.kind.value}{self.key:02d}"

    def __repr__(self) -> str:
        return f"Transform({self.label}, {self.size.value})"


def _transform(forward, kind, size, key=-1, action=None, color_map=None) -> Transform:
    fwd = _frozen(forward)
    cm = None if color_map is None else _frozen(color_map)
    return Transform(fwd, _frozen(invert(fwd)), kind, size, key, action, cm)


@dataclass(frozen=True, eq=False)
class CubeTables:
    """All precomputed permutation tables of one cube size (read-only)."""

    size: Size
    default_fcol: np.ndarray
    wcr: np.ndarray            # (24, n) forward tables
    wcr_inverse_key: np.ndarray
    twist: dict                # face -> (4, n), row q = q quarter turns
    color_map: np.ndarray      # (24, 6)
    wcr_faces: np.ndarray      # (24, 6) face F goes to face wcr_faces[k, F]

    @property
    def n(self) -> int:
        return len(self.default_fcol)


def _base(size: Size):
    if size is Size.POCKET2:
        return tables.POCKET_U, tables.POCKET_u, tables.POCKET_f
    return tables.RUBIKS_U, tables.RUBIKS_u, tables.RUBIKS_f


def _wcr_rows(u: np.ndarray, f: np.ndarray) -> list:
    n = len(u)
    ident = np.arange(n)
    finv = invert(f)
    ell = compose(finv, u, f)  # orange (front) face comes up
    ellinv = invert(ell)
    prefixes = (ident, f, compose(f, f), finv, ell, ellinv)
    return [compose(pre, power(u, k)) for pre in prefixes for k in range(4)]


def _derive_twists(U: np.ndarray, u: np.ndarray, f: np.ndarray, faces) -> dict:
    finv = invert(f)
    f2 = compose(f, f)
    ell = compose(finv, u, f)
    ellinv = invert(ell)
    quarter = {
        "U": U,
        "L": compose(finv, U, f),
        "F": compose(ell, U, ellinv),
        "D": compose(f2, U, f2),
        "R": compose(f, U, finv),
        "B": compose(ellinv, U, ell),
    }
    return {face: np.stack([power(quarter[face], q) for q in range(4)]) for face in faces}


@lru_cache(maxsize=None)
def cube_tables(size: Size) -> CubeTables:
    U, u, f = (np.array(t, dtype=np.int64) for t in _base(size))
    n = size.sticker_count
    per_face = n // 6
    dcol = np.repeat(np.arange(6), per_face)

    wcr = np.stack(_wcr_rows(u, f))
    ident = np.arange(n)
    inv_key = np.empty(N_WCR, dtype=np.int64)
    for k in range(N_WCR):
        hits = [j for j in range(N_WCR) if np.array_equal(compose(wcr[k], wcr[j]), ident)]
        assert len(hits) == 1
        inv_key[k] = hits[0]

    # color map c of rotation k: c[default color at j] = default color at T^-1[j]
    cmap = np.empty((N_WCR, 6), dtype=np.int64)
    for k in range(N_WCR):
        cmap[k, dcol] = dcol[invert(wcr[k])]

    first = np.arange(6) * per_face
    wcr_faces = dcol[wcr[:, first]]

    twist = _derive_twists(U, u, f, size.faces)
    for v in twist.values():
        v.setflags(write=False)
    for a in (wcr, inv_key, cmap, wcr_faces, dcol):
        a.setflags(write=False)
    return CubeTables(size, dcol, wcr, inv_key, twist, cmap, wcr_faces)


def base_twist_table(size: Size) -> Transform:
    return _transform(_base(size)[0], Kind.TWIST, size, action=Action("U", 1))


def base_wcr_tables(size: Size) -> tuple:
    _, u, f = _base(size)
    return _transform(u, Kind.WCR, size, key=1), _transform(f, Kind.WCR, size, key=4)


def build_wcr_set(size: Size) -> list:
    t = cube_tables(size)
    return [_transform(t.wcr[k], Kind.WCR, size, key=k) for k in range(N_WCR)]


def invert_wcr_key(key: int, size: Size = Size.POCKET2) -> int:
    if not 0 <= key < N_WCR:
        raise ValueError(f"WCR key out of range: {key}")
    return int(cube_tables(size).wcr_inverse_key[key])


def twist(size: Size, action: Action) -> Transform:
    t = cube_tables(size)
    if action.face not in t.twist:
        raise ValueError(f"face {action.face} is not used for {size.value}")
    return _transform(t.twist[action.face][action.quarter_turns], Kind.TWIST, size,
                      action=action)


def build_twist_set(size: Size) -> list:
    return [twist(size, Action(face, q)) for face in size.faces for q in (1, 2, 3)]


def wcr(size: Size, key: int) -> Transform:
    if not 0 <= key < N_WCR:
        raise ValueError(f"WCR key out of range: {key}")
    return _transform(cube_tables(size).wcr[key], Kind.WCR, size, key=key)


def color_trafo(size: Size, key: int) -> Transform:
    if not 0 <= key < N_WCR:
        raise ValueError(f"color transformation key out of range: {key}")
    t = cube_tables(size)
    return _transform(t.wcr[key], Kind.COLOR, size, key=key, color_map=t.color_map[key])
