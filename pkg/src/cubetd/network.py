"""The n-tuple value function with TD(0) updates and temporal coherence learning."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .board import BoardVector, NTupleDef, Representation, board_layout, random_walk_ntuples
from .cube import CubeState, CubeVariant, VariantMismatchError, normalize
from .rng import stream


class ResourceLimitError(MemoryError):
    pass


# Weight tables are allocated lazily by the OS, but refuse layouts whose
# address space alone is unreasonable.
MAX_TABLE_BYTES = 64 * 2**30


@dataclass(frozen=True)
class NetConfig:
    alpha: float = 0.25
    gamma: float = 1.0
    epsilon: float = 0.0
    cost: float = -0.1
    r_pos: float = 1.0
    tcl: bool = True
    tc_init: float = 1e-4
    tc_transfer: str = "id"          # "id" or "exp"
    tc_beta: float = 2.0
    tc_accumulation: str = "rwc"     # recommended weight change, or "delta"
    n_sym: int = 0
    normalize_by_tuples: bool = True

    def __post_init__(self):
        if self.tc_transfer not in ("id", "exp"):
            raise ValueError(f"unknown tc_transfer {self.tc_transfer!r}")
        if self.tc_accumulation not in ("rwc", "delta"):
            raise ValueError(f"unknown tc_accumulation {self.tc_accumulation!r}")
        if not 0 <= self.n_sym <= 24:
            raise ValueError("n_sym must lie in 0..24")
        if not self.cost < 0 < self.r_pos:
            raise ValueError("need cost < 0 < r_pos")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "NetConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown network config keys: {sorted(extra)}")
        return cls(**d)


class NTupleSystem:
    """Sum of one looked-up weight per n-tuple.

    All weights live in one flat float64 array; tuple ``t`` owns the slice
    starting at ``offsets[t]``.  TCL counters are stored as offsets from
    ``tc_init`` so that fresh tables are plain zeros.
    """

    def __init__(self, variant: CubeVariant, representation: Representation, tuples,
                 config: NetConfig = NetConfig(), provenance: dict | None = None):
        self.variant = variant
        self.representation = Representation(representation)
        self.layout = board_layout(self.representation, variant.size)
        self.tuples = list(tuples)
        self.config = config
        self.provenance = dict(provenance or {})
        if not self.tuples:
            raise ValueError("need at least one n-tuple")
        for t in self.tuples:
            if max(t.cells) >= self.layout.cells:
                raise ValueError(f"tuple {t.cells} outside board of {self.layout.cells} cells")
            if tuple(int(self.layout.radices[c]) for c in t.cells) != tuple(t.radices):
                raise ValueError(f"tuple radices {t.radices} disagree with the board")
        sizes = [t.lut_size for t in self.tuples]
        total = sum(sizes)
        per_entry = 24 if config.tcl else 8
        if total * per_entry > MAX_TABLE_BYTES:
            raise ResourceLimitError(
                f"weight tables need {total * per_entry / 2**30:.1f} GiB of address space")
        self.offsets = np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.int64)
        self.w = np.zeros(total)
        self.tc_n = np.zeros(total if config.tcl else 1)
        self.tc_a = np.zeros(total if config.tcl else 1)

        m = max(len(t.cells) for t in self.tuples)
        cells = np.zeros((len(self.tuples), m), dtype=np.int64)
        mult = np.zeros((len(self.tuples), m), dtype=np.int64)
        for i, t in enumerate(self.tuples):
            cells[i, :len(t.cells)] = t.cells
            place = 1
            for j in reversed(range(len(t.cells))):
                mult[i, j] = place
                place *= t.radices[j]
        self._cells, self._mult = cells, mult
        self._lens = np.array([len(t.cells) for t in self.tuples], dtype=np.int64)
        self.puzzle = K.make_puzzle(variant)
        self.board = K.make_board(self.layout)
        self._work = self.new_work()
        self._dummy_rng = np.random.default_rng(0)

    @classmethod
    def create(cls, variant: CubeVariant, representation, count: int, length: int,
               seed: int, config: NetConfig = NetConfig()) -> "NTupleSystem":
        rep = Representation(representation)
        tuples = random_walk_ntuples(count, length, rep, variant, stream(seed, "tuples"))
        return cls(variant, rep, tuples, config, {"seed": seed, "tuple_stream": "tuples"})

    # --- kernel views ---------------------------------------------------------

    @property
    def k(self) -> int:
        return len(self.tuples)

    @property
    def net(self) -> K.Net:
        return K.Net(self._cells, self._mult, self._lens, self.offsets, self.w, self.tc_n, self.tc_a)

    def frozen_net(self, weights: np.ndarray) -> K.Net:
        return self.net._replace(w=weights)

    def params(self, config: NetConfig | None = None) -> K.Params:
        c = config or self.config
        return K.Params(float(c.alpha), float(c.gamma), float(c.cost), float(c.r_pos),
                        1.0 / self.k if c.normalize_by_tuples else 1.0,
                        bool(c.tcl), float(c.tc_init), c.tc_transfer == "exp",
                        float(c.tc_beta), c.tc_accumulation == "delta")

    def new_work(self) -> K.Work:
        return K.make_work(self.puzzle, self.board, self.k)

    def _sloc(self, state: CubeState) -> np.ndarray:
        if state.size is not self.variant.size:
            raise VariantMismatchError(
                f"network is for {self.variant.size.value}, state is {state.size.value}")
        return np.array(normalize(state).sloc, dtype=np.int64)

    def _rng(self, rng):
        return self._dummy_rng if rng is None else rng

    # --- values ---------------------------------------------------------------

    def tuple_weights(self, t: int) -> np.ndarray:
        start = self.offsets[t]
        return self.w[start:start + self.tuples[t].lut_size]

    def active_indices(self, bv: BoardVector) -> list:
        """(tuple id, LUT index) for each tuple; the LUT index is tuple-local."""
        values = bv.values if isinstance(bv, BoardVector) else np.asarray(bv)
        if values.shape != (self.layout.cells,):
            raise ValueError(f"board vector has {values.shape} cells, expected {self.layout.cells}")
        return [(i, t.index(values)) for i, t in enumerate(self.tuples)]

    def weight_ids(self, state: CubeState) -> np.ndarray:
        """Flat weight ids active for ``state``."""
        bv = self.layout.encode(normalize(state))
        return np.array([self.offsets[i] + j for i, j in self.active_indices(bv)], dtype=np.int64)

    def raw_value(self, state: CubeState) -> float:
        return float(K.raw_value(self.net, self.board, self._sloc(state), self._work, 0))

    def sym_value(self, state: CubeState, n_sym: int, rng: np.random.Generator | None = None) -> float:
        if not 0 <= n_sym <= 24:
            raise ValueError("n_sym must lie in 0..24")
        return float(K.sym_value(self.puzzle, self.net, self.board, self._sloc(state),
                                 n_sym, self._rng(rng), self._work))

    def value(self, state: CubeState, rng: np.random.Generator | None = None) -> float:
        return self.sym_value(state, self.config.n_sym, rng)

    # --- learning -------------------------------------------------------------

    def td_update(self, state: CubeState, target: float,
                  rng: np.random.Generator | None = None) -> float:
        if not math.isfinite(target):
            raise ValueError("target must be finite")
        return float(K.td_update(self.puzzle, self.net, self.board, self.params(),
                                 self._sloc(state), float(target), self.config.n_sym,
                                 self._rng(rng), self._work))

    def tcl_accumulate(self, weight_id: int, delta_theta: float) -> None:
        if not self.config.tcl:
            raise RuntimeError("TCL is disabled for this network")
        self.tc_n[weight_id] += delta_theta
        self.tc_a[weight_id] += abs(delta_theta)

    def tcl_counters(self, weight_id):
        """Signed sum N_i and absolute sum A_i, with A_i already carrying ``tc_init``."""
        return self.tc_n[weight_id], self.config.tc_init + self.tc_a[weight_id]

    def alpha_i(self, weight_id):
        if not self.config.tcl:
            return np.ones_like(np.asarray(weight_id), dtype=float)
        n, a = self.tcl_counters(weight_id)
        x = (self.config.tc_init + np.abs(n)) / a
        if self.config.tc_transfer == "exp":
            return np.exp(self.config.tc_beta * (x - 1.0))
        return x

    def copy(self) -> "NTupleSystem":
        out = NTupleSystem(self.variant, self.representation, self.tuples, self.config, self.provenance)
        out.w[:] = self.w
        out.tc_n[:] = self.tc_n
        out.tc_a[:] = self.tc_a
        return out

    def with_config(self, **changes) -> "NTupleSystem":
        """Same tables (shared, not copied) under a modified config."""
        cfg = dataclasses.replace(self.config, **changes)
        if cfg.tcl != self.config.tcl:
            raise ValueError("cannot toggle TCL on an existing network")
        out = object.__new__(NTupleSystem)
        out.__dict__.update(self.__dict__)
        out.config = cfg
        out._work = out.new_work()
        return out


def ntuple_def(cells, layout) -> NTupleDef:
    return NTupleDef(tuple(cells), tuple(int(layout.radices[c]) for c in cells))
