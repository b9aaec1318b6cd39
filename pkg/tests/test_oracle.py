import math

import numpy as np
import pytest
from helpers import fresh_net

from cubetd.cube import (
    POCKET2_HTM,
    POCKET2_QTM,
    RUBIKS3_QTM,
    Action,
    CorruptStateError,
    Size,
    apply_moves,
    apply_transform,
    cube_tables,
    default_cube,
    normalize,
    scramble,
    wcr,
)
from cubetd.mcts import WrapConfig
from cubetd.oracle import (
    OracleResourceError,
    bfs_enumerate,
    exact_distance,
    fcol_from_sloc,
    load_table,
    optimality_audit,
    pack_keys,
)

TOTAL = math.factorial(7) * 3**6


def test_state_count_formula():
    assert TOTAL == 3_674_160


def test_qtm_table(qtm_table):
    assert qtm_table.count == TOTAL
    assert sum(qtm_table.level_sizes) == TOTAL
    assert qtm_table.max_depth == 14
    assert qtm_table.level_sizes[:2] == [1, 6]


def test_htm_table(htm_table):
    assert htm_table.count == TOTAL
    assert htm_table.max_depth == 11
    assert htm_table.level_sizes[:2] == [1, 9]


def test_first_levels_match_plain_bfs(qtm_table, htm_table, qtm_levels, htm_levels):
    assert qtm_table.level_sizes[:4] == [len(l) for l in qtm_levels]
    assert htm_table.level_sizes[:3] == [len(l) for l in htm_levels]
    for d, level in enumerate(qtm_levels):
        assert all(exact_distance(s, qtm_table) == d for s in level.values())


def test_keys_are_unique_and_sorted(qtm_table):
    k = qtm_table.keys
    assert np.all(k[1:] > k[:-1])


@pytest.mark.parametrize("name", ["qtm_table", "htm_table"])
def test_bellman_consistency(name, request):
    assert request.getfixturevalue(name).check_bellman() == (0, 0)


def test_neighbors_differ_by_at_most_one(qtm_table):
    rng = np.random.default_rng(0)
    idx = rng.integers(0, qtm_table.count, 100_000)
    states = qtm_table.states[idx].astype(np.int64)
    perms = np.stack([cube_tables(Size.POCKET2).twist[a.face][a.quarter_turns] for a in POCKET2_QTM.actions])
    acts = rng.integers(0, len(perms), idx.size)
    children = np.take_along_axis(perms[acts], states, axis=1)
    d0 = qtm_table.lookup_slocs(states).astype(int)
    d1 = qtm_table.lookup_slocs(children).astype(int)
    assert np.abs(d0 - d1).max() == 1


@pytest.mark.parametrize("variant", [POCKET2_QTM, POCKET2_HTM])
def test_scramble_distance_bound(variant, qtm_table, htm_table):
    table = qtm_table if variant is POCKET2_QTM else htm_table
    rng = np.random.default_rng(1)
    ps = rng.integers(1, 20, 10_000)
    slocs = np.stack([np.array(scramble(variant, int(p), rng)[0].sloc) for p in ps])
    assert np.all(table.lookup_slocs(slocs) <= ps)


def test_exact_distance_examples(qtm_table, htm_table):
    cube = default_cube(POCKET2_QTM)
    assert exact_distance(cube, qtm_table) == 0
    u = apply_moves(cube, [Action("U", 1)])
    assert exact_distance(u, qtm_table) == 1
    u2 = apply_moves(cube, [Action("U", 2)])
    assert exact_distance(u2, qtm_table) == 2
    assert exact_distance(u2, htm_table) == 1
    with pytest.raises(ValueError):
        exact_distance(default_cube(RUBIKS3_QTM), qtm_table)


def test_whole_cube_rotations_share_one_key():
    rng = np.random.default_rng(2)
    for _ in range(20):
        s = scramble(POCKET2_QTM, 8, rng)[0]
        keys = {pack_keys(normalize(apply_transform(s, wcr(Size.POCKET2, k))).fcol[None])[0]
                for k in range(24)}
        assert len(keys) == 1


def test_pack_keys_layout():
    fcol = np.zeros((1, 24), np.uint8)
    fcol[0, 0] = 5
    fcol[0, 23] = 1
    assert pack_keys(fcol)[0] == bytes([5 << 5, 0, 0, 0, 0, 0, 0, 0, 1])
    assert np.array_equal(fcol_from_sloc(np.arange(24))[0], cube_tables(Size.POCKET2).default_fcol)


def test_unknown_state_is_reported(qtm_table):
    with pytest.raises(CorruptStateError):
        qtm_table.lookup_keys(np.array([b"\xff" * 9], dtype="S9"))


def test_export_round_trip(qtm_table, tmp_path):
    a, b = tmp_path / "a.dt", tmp_path / "b.dt"
    qtm_table.export(a)
    loaded = load_table(a)
    loaded.export(b)
    assert a.read_bytes() == b.read_bytes()
    assert loaded.level_sizes == qtm_table.level_sizes and loaded.metric == qtm_table.metric
    with pytest.raises(RuntimeError):
        loaded.check_bellman()
    qtm_table.write_levels(tmp_path / "levels.csv")
    rows = (tmp_path / "levels.csv").read_text().splitlines()
    assert rows[0] == "depth,states" and rows[-1] == "14,276"


def test_rerun_is_identical(qtm_table):
    again = bfs_enumerate(POCKET2_QTM)
    assert np.array_equal(again.keys, qtm_table.keys)
    assert np.array_equal(again.dist, qtm_table.dist)


def test_bad_table_files(qtm_table, tmp_path):
    p = tmp_path / "t.dt"
    qtm_table.export(p)
    data = p.read_bytes()
    (tmp_path / "magic.dt").write_bytes(b"X" + data[1:])
    (tmp_path / "short.dt").write_bytes(data[:-5])
    (tmp_path / "ver.dt").write_bytes(data[:12] + (9).to_bytes(4, "little") + data[16:])
    for name in ("magic.dt", "short.dt", "ver.dt"):
        with pytest.raises(ValueError):
            load_table(tmp_path / name)


def test_rejects_rubiks_and_reports_memory_budget():
    with pytest.raises(ValueError):
        bfs_enumerate(RUBIKS3_QTM)
    with pytest.raises(OracleResourceError) as e:
        bfs_enumerate(POCKET2_QTM, max_bytes=11_022_480 + 24 * 200)
    assert e.value.level_sizes == [1, 6, 27, 120]


def test_audit_on_an_optimal_domain(small_agent, qtm_table):
    rep = optimality_audit(small_agent, WrapConfig(iterations=0), qtm_table, 100, p=3)
    assert rep.solved_rate == 1.0
    assert rep.overheads == [0] * 100
    wrapped = optimality_audit(small_agent, WrapConfig(iterations=20), qtm_table, 30, p=3)
    assert wrapped.mean_overhead == 0


def test_audit_survives_a_random_policy(qtm_table, htm_table):
    rep = optimality_audit(fresh_net(), WrapConfig(iterations=0), qtm_table, 50, p=14, e_eval=30)
    assert rep.samples == 50 and rep.solved < 50
    assert all(o >= 0 for o in rep.overheads)
    if rep.overheads:
        assert rep.mean_overhead > 5
    else:
        assert math.isnan(rep.mean_overhead)
    with pytest.raises(ValueError):
        optimality_audit(fresh_net(), WrapConfig(iterations=0), htm_table, 5)
