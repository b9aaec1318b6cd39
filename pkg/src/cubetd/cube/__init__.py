"""Cube states and the transformation algebra for the 2x2x2 and 3x3x3 cubes."""

from .algebra import (
    N_WCR,
    CubeTables,
    Kind,
    Transform,
    base_twist_table,
    base_wcr_tables,
    build_twist_set,
    build_wcr_set,
    color_trafo,
    compose,
    cube_tables,
    invert,
    invert_wcr_key,
    twist,
    wcr,
)
from .state import (
    CorruptStateError,
    CubeState,
    VariantMismatchError,
    apply_moves,
    apply_transform,
    color_transform,
    count_distinct_symmetries,
    default_cube,
    invert_sloc,
    is_solved,
    normalize,
    normalizing_key,
    reconstruct_sloc,
    render,
    scramble,
    state_from_sloc,
    symmetric_set,
)
from .variant import (
    POCKET2_HTM,
    POCKET2_QTM,
    RUBIKS3_HTM,
    RUBIKS3_QTM,
    Action,
    CubeVariant,
    Metric,
    NotationError,
    Size,
)
