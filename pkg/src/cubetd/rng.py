"""Named random sub-streams derived from one run seed.

Every consumer asks for its own stream (``scramble``, ``tuples``,
``symmetry``, ``tiebreak``, ``eval``), so changing how often one component
draws never shifts the numbers another component sees.
"""

from __future__ import annotations

import zlib

import numpy as np

STREAMS = ("scramble", "tuples", "symmetry", "tiebreak", "eval")


def stream(seed: int, name: str, *extra: int) -> np.random.Generator:
    if seed < 0:
        raise ValueError("seed must be non-negative")
    words = [seed & 0xFFFFFFFFFFFFFFFF, zlib.crc32(name.encode())] + [int(e) for e in extra]
    return np.random.default_rng(np.random.SeedSequence(words))
