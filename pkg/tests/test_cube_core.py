import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import geometric_oracle as geo
from cubetd.cube import (
    N_WCR,
    POCKET2_HTM,
    POCKET2_QTM,
    RUBIKS3_QTM,
    Action,
    CorruptStateError,
    CubeState,
    Size,
    VariantMismatchError,
    apply_moves,
    apply_transform,
    base_twist_table,
    base_wcr_tables,
    build_twist_set,
    build_wcr_set,
    color_trafo,
    color_transform,
    compose,
    count_distinct_symmetries,
    cube_tables,
    default_cube,
    invert_sloc,
    invert_wcr_key,
    is_solved,
    normalize,
    reconstruct_sloc,
    render,
    scramble,
    symmetric_set,
    twist,
    wcr,
)

P2, R3 = Size.POCKET2, Size.RUBIKS3

# Reference rows for the 2x2x2 twists, entered by hand.
REF_TWISTS = {
    ("U", 1): [1, 2, 3, 0, 11, 8, 6, 7, 18, 9, 10, 17, 12, 13, 14, 15, 16, 22, 23, 19, 20, 21, 4, 5],
    ("L", 1): [22, 1, 2, 21, 5, 6, 7, 4, 3, 0, 10, 11, 12, 13, 8, 9, 16, 17, 18, 19, 20, 14, 15, 23],
    ("F", 1): [7, 4, 2, 3, 14, 5, 6, 13, 9, 10, 11, 8, 12, 18, 19, 15, 16, 17, 0, 1, 20, 21, 22, 23],
}
REF_TWISTS_INV = {
    "U": [3, 0, 1, 2, 22, 23, 6, 7, 5, 9, 10, 4, 12, 13, 14, 15, 16, 11, 8, 19, 20, 21, 17, 18],
    "L": [9, 1, 2, 8, 7, 4, 5, 6, 14, 15, 10, 11, 12, 13, 21, 22, 16, 17, 18, 19, 20, 3, 0, 23],
    "F": [18, 19, 2, 3, 1, 5, 6, 0, 11, 8, 9, 10, 12, 7, 4, 15, 16, 17, 13, 14, 20, 21, 22, 23],
}
REF_u_INV = [3, 0, 1, 2, 22, 23, 20, 21, 5, 6, 7, 4, 13, 14, 15, 12,
               10, 11, 8, 19, 19, 16, 17, 18]
REF_f_INV = [18, 19, 16, 17, 1, 2, 3, 0, 11, 8, 9, 10, 6, 7, 4, 5,
               15, 12, 13, 14, 21, 22, 23, 20]
REF_INV_KEY = [0, 3, 2, 1, 12, 19, 6, 21, 8, 9, 10, 11, 4, 23, 14, 17,
                 20, 15, 18, 5, 16, 7, 22, 13]
REF_RUBIKS_U = [2, 3, 4, 5, 6, 7, 0, 1, 22, 23, 16, 11, 12, 13, 14, 15,
                  36, 17, 18, 19, 20, 21, 34, 35, 24, 25, 26, 27, 28, 29, 30, 31,
                  32, 33, 44, 45, 46, 37, 38, 39, 40, 41, 42, 43, 8, 9, 10, 47]


def random_state(size, rng, length=30):
    state = default_cube(size)
    acts = [Action(f, q) for f in size.faces for q in (1, 2, 3)]
    return apply_moves(state, [acts[i] for i in rng.integers(0, len(acts), length)])


# --- tables ------------------------------------------------------------------

def test_base_tables_match_reference():
    U = base_twist_table(P2)
    assert (U.forward[0], U.forward[4], U.forward[17]) == (1, 11, 22)
    assert U.inverse[0] == 3
    R = base_twist_table(R3)
    # U carries sticker 44 to 8; sticker 20 stays put
    assert (R.forward[0], R.forward[8], R.forward[44], R.forward[20]) == (2, 22, 8, 20)
    assert R.forward.tolist() == REF_RUBIKS_U
    u, f = base_wcr_tables(P2)
    assert (u.forward[0], u.forward[4], u.forward[16]) == (1, 11, 21)
    assert (f.forward[0], f.forward[16]) == (7, 2)
    assert np.array_equal(compose(*[u.forward] * 4), np.arange(24))


@pytest.mark.parametrize("face", ["U", "L", "F"])
def test_derived_twists_reproduce_reference_rows(face):
    t = twist(P2, Action(face, 1))
    assert t.forward.tolist() == REF_TWISTS[(face, 1)]
    assert t.inverse.tolist() == REF_TWISTS_INV[face]
    assert twist(P2, Action(face, 3)).forward.tolist() == REF_TWISTS_INV[face]


def test_basic_rotation_inverses_match_reference():
    u, f = base_wcr_tables(P2)
    assert f.inverse.tolist() == REF_f_INV
    got = u.inverse.tolist()
    # the reference row has a duplicated 19 at index 19; the true entry is 9
    assert [g for i, g in enumerate(got) if i != 19] == [p for i, p in enumerate(REF_u_INV) if i != 19]
    assert got[19] == 9


@pytest.mark.parametrize("size,pos", [(P2, geo.pocket_positions()), (R3, geo.rubiks_positions())])
def test_tables_agree_with_geometric_model(size, pos):
    for face in size.faces:
        assert twist(size, Action(face, 1)).forward.tolist() == geo.face_twist(pos, face).tolist(), face
    u, f = base_wcr_tables(size)
    assert u.forward.tolist() == geo.whole_rotation(pos, "U").tolist()
    assert f.forward.tolist() == geo.whole_rotation(pos, "F").tolist()
    # l turns counterclockwise around the left face
    assert wcr(size, 16).forward.tolist() == geo.whole_rotation(pos, "L").tolist()


@pytest.mark.parametrize("size", [P2, R3])
def test_wcr_group(size):
    rots = build_wcr_set(size)
    fwd = np.stack([t.forward for t in rots])
    assert len({r.tobytes() for r in fwd}) == 24
    assert np.array_equal(fwd[0], np.arange(size.sticker_count))
    lookup = {r.tobytes(): k for k, r in enumerate(fwd)}
    for a in range(24):
        for b in range(24):
            assert compose(fwd[a], fwd[b]).tobytes() in lookup
    assert np.array_equal(fwd[5], compose(fwd[4], fwd[1]))  # key 5 = f then u


@pytest.mark.parametrize("size", [P2, R3])
def test_inverse_keys(size):
    keys = [invert_wcr_key(k, size) for k in range(24)]
    assert keys == REF_INV_KEY
    assert (keys[5], keys[7], keys[13], keys[0], keys[8]) == (19, 21, 23, 0, 8)
    assert sum(k == v for k, v in enumerate(keys)) == 10
    with pytest.raises(ValueError):
        invert_wcr_key(24)


@pytest.mark.parametrize("size", [P2, R3])
def test_every_transform_inverts_and_has_correct_order(size):
    n = size.sticker_count
    ident = np.arange(n)
    for t in build_twist_set(size) + build_wcr_set(size):
        assert np.array_equal(t.inverse[t.forward], ident)
    for face in size.faces:
        q = twist(size, Action(face, 1)).forward
        h = twist(size, Action(face, 2)).forward
        assert not np.array_equal(q, ident)
        assert np.array_equal(compose(q, q, q, q), ident)
        assert not np.array_equal(h, ident) and np.array_equal(compose(h, h), ident)


@pytest.mark.parametrize("size", [P2, R3])
def test_color_maps_form_group_isomorphic_to_wcr(size):
    t = cube_tables(size)
    maps = {m.tobytes() for m in t.color_map}
    assert len(maps) == 24
    for m in t.color_map:
        assert sorted(m.tolist()) == list(range(6))
    lookup = {r.tobytes(): k for k, r in enumerate(t.wcr)}
    for a in range(24):
        for b in range(24):
            k = lookup[compose(t.wcr[a], t.wcr[b]).tobytes()]
            # recoloring reverses the order: (a then b) recolors by c_a after c_b
            assert np.array_equal(t.color_map[k], t.color_map[a][t.color_map[b]])


def test_twists_keep_drb_cubie_on_pocket():
    for t in build_twist_set(P2):
        assert t.forward[12] == 12 and t.forward[16] == 16 and t.forward[20] == 20


# --- states ------------------------------------------------------------------

def test_default_cube():
    d = default_cube(POCKET2_HTM)
    assert d.fcol.tolist() == [c for c in range(6) for _ in range(4)]
    assert d.sloc.tolist() == list(range(24))
    r = default_cube(R3)
    assert len(r.fcol) == 48 and np.bincount(r.fcol).tolist() == [8] * 6
    assert is_solved(d) and is_solved(r)


def test_u_twist_example():
    s = apply_transform(default_cube(P2), twist(P2, Action("U", 1)))
    assert (s.fcol[8], s.fcol[9], s.fcol[4], s.sloc[0]) == (1, 2, 5, 1)
    assert invert_sloc(s)[1] == 0
    assert not is_solved(s)
    back = apply_transform(s, twist(P2, Action("U", 3)))
    assert is_solved(back) and back.sloc.tolist() == list(range(24))


def test_apply_is_pure_and_checks_variant():
    d = default_cube(P2)
    before = d.fcol.copy()
    apply_transform(d, twist(P2, Action("L", 1)))
    assert np.array_equal(d.fcol, before)
    with pytest.raises(VariantMismatchError):
        apply_transform(d, twist(R3, Action("U", 1)))
    with pytest.raises(ValueError):
        d.fcol[0] = 3


def test_wcr_identity_and_round_trip():
    rng = np.random.default_rng(1)
    for size in (P2, R3):
        for _ in range(200):
            s = random_state(size, rng, 20)
            assert apply_transform(s, wcr(size, 0)) == s
            for face in size.faces:
                t = apply_transform(s, twist(size, Action(face, 1)))
                back = apply_transform(t, twist(size, Action(face, 3)))
                assert back == s and np.array_equal(back.sloc, s.sloc)
            assert np.array_equal(s.sloc[invert_sloc(s)], np.arange(size.sticker_count))


def test_fcol_sloc_relation_small_fuzz():
    rng = np.random.default_rng(2)
    for size in (P2, R3):
        transforms = build_twist_set(size) + build_wcr_set(size) + \
            [color_trafo(size, k) for k in range(24)]
        dcol = cube_tables(size).default_fcol
        for _ in range(100):
            s = default_cube(size)
            for i in rng.integers(0, len(transforms), rng.integers(1, 101)):
                s = apply_transform(s, transforms[i])
            assert np.array_equal(s.fcol[s.sloc], dcol)


def test_normalize():
    d = default_cube(P2)
    assert normalize(d) == d
    assert normalize(apply_transform(d, wcr(P2, 5))) == d
    r = default_cube(R3)
    rot = apply_transform(r, wcr(R3, 13))
    assert rot != r and normalize(rot) == r and np.array_equal(normalize(rot).sloc, r.sloc)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([P2, R3]), st.integers(0, 2**32 - 1))
def test_normalize_idempotent_and_collapses_rotations(size, seed):
    rng = np.random.default_rng(seed)
    s = random_state(size, rng, 15)
    n = normalize(s)
    assert normalize(n) == n
    images = {normalize(apply_transform(s, w)) for w in build_wcr_set(size)}
    assert images == {n}
    for w in build_wcr_set(size):
        assert np.array_equal(normalize(apply_transform(s, w)).sloc, n.sloc)


def test_normalize_rejects_corrupt_state():
    d = default_cube(R3)
    bad = CubeState(R3, d.fcol, d.sloc, np.array([0, 0, 2, 3, 4, 5]))
    with pytest.raises(CorruptStateError):
        normalize(bad)


def test_color_transform_worked_example():
    t = cube_tables(P2)
    # w->g, b->w, o->o, y->b, g->y, r->r
    assert t.color_map[4].tolist() == [4, 0, 2, 1, 3, 5]
    s = apply_transform(default_cube(P2), twist(P2, Action("U", 1)))
    c = color_transform(s, 4)
    assert invert_sloc(c).tolist() == [9, 1, 2, 8, 7, 4, 5, 6, 14, 15, 10, 11,
                                       12, 13, 21, 22, 16, 17, 18, 19, 20, 3, 0, 23]
    assert (c.sloc[12], c.sloc[16], c.sloc[20]) == (12, 16, 20)
    with pytest.raises(ValueError):
        color_transform(s, 24)


def test_color_transform_identity_and_3x3_conjugation():
    rng = np.random.default_rng(3)
    w = cube_tables(R3).wcr
    inv = cube_tables(R3).wcr_inverse_key
    for size in (P2, R3):
        for _ in range(50):
            s = random_state(size, rng, 12)
            c0 = color_transform(s, 0)
            assert c0 == s and np.array_equal(c0.sloc, s.sloc)
    for _ in range(50):
        s = random_state(R3, rng, 12)
        for k in range(24):
            # on the 3x3x3 a color transformation is conjugation by the rotation
            expect = w[inv[k]][s.sloc[w[k]]]
            assert np.array_equal(color_transform(s, k).sloc, expect)


def test_symmetric_set():
    rng = np.random.default_rng(4)
    d = default_cube(P2)
    assert symmetric_set(d, 0, rng) == [d]
    full = symmetric_set(d, 24, rng)
    assert len(full) == 24 and all(x == d for x in full)
    s, _ = scramble(RUBIKS3_QTM, 10, rng)
    sym = symmetric_set(s, 24, rng)
    assert len(sym) == 24 and sym[0] is s
    assert len(set(sym)) >= 20
    assert len(symmetric_set(s, 8, rng)) == 8
    with pytest.raises(ValueError):
        symmetric_set(s, 25, rng)


def test_count_distinct_symmetries():
    assert count_distinct_symmetries(default_cube(P2)) == 1
    assert count_distinct_symmetries(default_cube(R3)) == 1
    rng = np.random.default_rng(5)
    vals = [count_distinct_symmetries(scramble(RUBIKS3_QTM, 10, rng)[0]) for _ in range(20)]
    assert all(1 <= v <= 24 for v in vals) and np.mean(vals) > 22


def test_reconstruct_sloc():
    for size in (P2, R3):
        d = default_cube(size)
        assert reconstruct_sloc(d.fcol, size).tolist() == list(range(size.sticker_count))
    s = apply_transform(default_cube(P2), twist(P2, Action("U", 1)))
    r = reconstruct_sloc(s.fcol, P2)
    assert (r[0], r[4]) == (1, 11)
    rng = np.random.default_rng(6)
    for size in (P2, R3):
        for _ in range(300):
            s = random_state(size, rng, 25)
            assert np.array_equal(reconstruct_sloc(s.fcol, size), s.sloc)
    bad = default_cube(P2).fcol.copy()
    bad[[0, 4]] = bad[[4, 0]]
    with pytest.raises(CorruptStateError):
        reconstruct_sloc(bad, P2)


def test_scramble():
    rng = np.random.default_rng(7)
    one_twist = {apply_moves(default_cube(P2), [a]) for a in POCKET2_QTM.actions}
    assert len(one_twist) == 6
    for _ in range(200):
        s, seq = scramble(POCKET2_QTM, 1, rng)
        assert s in one_twist and len(seq) == 1 and not is_solved(s)
    with pytest.raises(ValueError):
        scramble(POCKET2_QTM, 0, rng)
    counts = np.zeros(9)
    draws = 10_000
    for _ in range(draws):
        counts[scramble(POCKET2_HTM, 1, rng)[1][0]] += 1
    sigma = np.sqrt(draws * (1 / 9) * (8 / 9))
    assert np.all(np.abs(counts - draws / 9) < 3 * sigma)


def test_scramble_states_are_normalized():
    rng = np.random.default_rng(8)
    for v in (POCKET2_HTM, RUBIKS3_QTM):
        for _ in range(50):
            s, _ = scramble(v, 8, rng)
            assert normalize(s) is s


def test_render():
    text = render(apply_transform(default_cube(P2), twist(P2, Action("U", 1))))
    assert "b5" in text and "w3" in text
    assert "[w]" in render(default_cube(R3))


def test_net_folds_onto_geometric_model():
    from cubetd.cube import geometry
    assert np.allclose(geometry.sticker_positions(P2), geo.pocket_positions())
    assert np.allclose(geometry.sticker_positions(R3), geo.rubiks_positions())
    R = geometry.right_neighbor(P2)
    # the 0-8-4 cubie, marching clockwise
    assert (R[0], R[8], R[4]) == (8, 4, 0)
    assert len(geometry.cubies(P2)) == 8
    sizes = sorted(len(c) for c in geometry.cubies(R3))
    assert sizes == [2] * 12 + [3] * 8
