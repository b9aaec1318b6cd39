import numpy as np
import pytest
from helpers import fresh_net, small_bfs

from cubetd.cube import POCKET2_HTM, POCKET2_QTM
from cubetd.trainer import TrainConfig, train


@pytest.fixture(scope="session")
def qtm_levels():
    return small_bfs(POCKET2_QTM, 3)


@pytest.fixture(scope="session")
def htm_levels():
    return small_bfs(POCKET2_HTM, 2)


@pytest.fixture(scope="session")
def qtm_table():
    from cubetd.oracle import bfs_enumerate
    return bfs_enumerate(POCKET2_QTM)


@pytest.fixture(scope="session")
def htm_table():
    from cubetd.oracle import bfs_enumerate
    return bfs_enumerate(POCKET2_HTM)


@pytest.fixture(scope="session")
def small_agent():
    """Pocket2 QTM agent trained exhaustively enough for distances up to 3."""
    net = fresh_net()
    train(TrainConfig(p_max=3, e_train=6, episodes=20_000, seed=0), net)
    return net


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for status, name, info in ACCEPTANCE:
        details = "  ".join(f"{k}={v}" for k, v in info.items())
        terminalreporter.write_line(f"{status}  {name}  {details}".rstrip())
