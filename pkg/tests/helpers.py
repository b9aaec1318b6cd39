from contextlib import contextmanager

from cubetd.board import Representation
from cubetd.cube import POCKET2_QTM, apply_moves, default_cube, normalize
from cubetd.network import NetConfig, NTupleSystem


def small_bfs(variant, depth):
    """Plain-python BFS over normalized states; independent of the oracle module."""
    start = default_cube(variant)
    levels = [{start.key(): start}]
    seen = {start.key()}
    for _ in range(depth):
        nxt = {}
        for s in levels[-1].values():
            for a in variant.actions:
                t = normalize(apply_moves(s, [a]))
                if t.key() not in seen:
                    seen.add(t.key())
                    nxt[t.key()] = t
        levels.append(nxt)
    return levels


def fresh_net(variant=POCKET2_QTM, seed=0, tuples=60, length=7, **cfg):
    return NTupleSystem.create(variant, Representation.STICKER2, tuples, length, seed, NetConfig(**cfg))


# acceptance results, printed in the terminal summary
ACCEPTANCE = []


@contextmanager
def criterion(name):
    """Record PASS or FAIL for ``name`` with the measurements put into the yielded dict."""
    info = {}
    try:
        yield info
    except BaseException:
        ACCEPTANCE.append(("FAIL", name, info))
        raise
    ACCEPTANCE.append(("PASS", name, info))
