"""Hand-entered tables.

Only the U twist and the two basic whole-cube rotations u and f are entered
by hand for each cube size.  Everything else (other twists, the 24 rotations,
inverses, color transformations) is derived in :mod:`cubetd.cube.algebra`.

Permutations are forward tables: ``T[i]`` is the location that the sticker at
location ``i`` moves to.
"""

from __future__ import annotations

import numpy as np

# --- 2x2x2 -------------------------------------------------------------------

POCKET_U = (1, 2, 3, 0, 11, 8, 6, 7, 18, 9, 10, 17,
            12, 13, 14, 15, 16, 22, 23, 19, 20, 21, 4, 5)
POCKET_u = (1, 2, 3, 0, 11, 8, 9, 10, 18, 19, 16, 17,
            15, 12, 13, 14, 21, 22, 23, 20, 6, 7, 4, 5)
POCKET_f = (7, 4, 5, 6, 14, 15, 12, 13, 9, 10, 11, 8,
            17, 18, 19, 16, 2, 3, 0, 1, 23, 20, 21, 22)

# --- 3x3x3 -------------------------------------------------------------------

RUBIKS_U = (2, 3, 4, 5, 6, 7, 0, 1, 22, 23, 16, 11, 12, 13, 14, 15,
            36, 17, 18, 19, 20, 21, 34, 35, 24, 25, 26, 27, 28, 29, 30, 31,
            32, 33, 44, 45, 46, 37, 38, 39, 40, 41, 42, 43, 8, 9, 10, 47)
RUBIKS_u = (2, 3, 4, 5, 6, 7, 0, 1, 22, 23, 16, 17, 18, 19, 20, 21,
            36, 37, 38, 39, 32, 33, 34, 35, 30, 31, 24, 25, 26, 27, 28, 29,
            42, 43, 44, 45, 46, 47, 40, 41, 12, 13, 14, 15, 8, 9, 10, 11)
RUBIKS_f = (14, 15, 8, 9, 10, 11, 12, 13, 28, 29, 30, 31, 24, 25, 26, 27,
            18, 19, 20, 21, 22, 23, 16, 17, 34, 35, 36, 37, 38, 39, 32, 33,
            4, 5, 6, 7, 0, 1, 2, 3, 46, 47, 40, 41, 42, 43, 44, 45)

# --- flattened layout --------------------------------------------------------
# Each face as seen in the unfolded net (U on top, then L F R B, D below).
# ``None`` marks the (unnumbered) center of a 3x3x3 face.

FACES = "ULFDRB"
COLOR_LETTERS = "wboygr"

POCKET_NET = {
    "U": ((3, 2), (0, 1)),
    "L": ((5, 4), (6, 7)),
    "F": ((8, 11), (9, 10)),
    "D": ((14, 13), (15, 12)),
    "R": ((18, 17), (19, 16)),
    "B": ((23, 22), (20, 21)),
}

RUBIKS_NET = {
    "U": ((6, 5, 4), (7, None, 3), (0, 1, 2)),
    "L": ((10, 9, 8), (11, None, 15), (12, 13, 14)),
    "F": ((16, 23, 22), (17, None, 21), (18, 19, 20)),
    "D": ((28, 27, 26), (29, None, 25), (30, 31, 24)),
    "R": ((36, 35, 34), (37, None, 33), (38, 39, 32)),
    "B": ((46, 45, 44), (47, None, 43), (40, 41, 42)),
}

# --- STICKER2 correspondence ---------------------------------------------------
# Corner location -> (cubie letter, face ID).  Pocket2 location i corresponds to
# Rubiks3 location 2*i.
CORNER_LETTERS = "abcdadhgagfbefghecbfehdc"
CORNER_FACE_IDS = (1, 1, 1, 1, 2, 3, 2, 3, 3, 2, 3, 2,
                   1, 1, 1, 1, 2, 2, 3, 2, 3, 3, 2, 3)
# Rubiks3 edge location 2*i+1 -> (cubie letter, face ID).  Face ID is 1 on
# U/D stickers of top and bottom edges and on F/B stickers of middle edges.
EDGE_LETTERS = "ABCDDGKEEJFAIJKLHBFILGCH"
EDGE_FACE_IDS = (1, 1, 1, 1, 2, 2, 2, 2, 1, 2, 1, 2,
                 1, 1, 1, 1, 2, 2, 2, 2, 2, 1, 2, 1)

POCKET_TRACKED = (0, 1, 2, 3, 13, 14, 15)
RUBIKS_TRACKED_CORNERS = (0, 2, 4, 6, 24, 26, 28, 30)
RUBIKS_TRACKED_EDGES = (1, 3, 5, 7, 17, 21, 43, 47, 25, 27, 29, 31)

# Sticker sets used to rebuild sloc from fcol.
POCKET_LOCATE = (0, 1, 2, 3, 12, 13, 14, 15)
RUBIKS_LOCATE_CORNERS = (0, 2, 4, 6, 24, 26, 28, 30)
RUBIKS_LOCATE_EDGES = (1, 3, 5, 7, 25, 27, 29, 31, 11, 15, 21, 33)


def as_array(t) -> np.ndarray:
    a = np.array(t, dtype=np.int64)
    a.setflags(write=False)
    return a
