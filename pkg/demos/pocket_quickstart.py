"""Train a small 2x2x2 agent, evaluate it, and solve one cube.

Runs in about a minute.  For the full preset run use the CLI:

    cubetd --seed 42 train -o p2qtm.ctd
    cubetd eval p2qtm.ctd --p 1-14 --iterations 0,100
"""
import time

import numpy as np

from cubetd.board import Representation
from cubetd.cube import POCKET2_QTM, render, scramble
from cubetd.mcts import Searcher, WrapConfig, evaluate, play
from cubetd.network import NetConfig, NTupleSystem
from cubetd.trainer import TrainConfig, train

net = NTupleSystem.create(POCKET2_QTM, Representation.STICKER2, 60, 7, 42, NetConfig())
t0 = time.perf_counter()
train(TrainConfig(p_max=8, e_train=11, episodes=150_000, seed=42), net)
print(f"trained in {time.perf_counter() - t0:.0f}s")

print(" p   I=0    I=100")
for p in range(1, 11):
    g = evaluate(net, p, 100, 50, WrapConfig(iterations=0), 0, 42).solved_rate
    w = evaluate(net, p, 100, 50, WrapConfig(iterations=100), 0, 42).solved_rate
    print(f"{p:2d}  {g:.2f}   {w:.2f}")

rng = np.random.default_rng(7)
cube, moves = scramble(POCKET2_QTM, 8, rng)
print("scramble:", " ".join(str(POCKET2_QTM.actions[a]) for a in moves))
print(render(cube))
searcher = Searcher(net, WrapConfig(iterations=100), 0, rng, rng)
solved, played = play(net, np.array(cube.sloc), 50, searcher)
solution = " ".join(str(POCKET2_QTM.actions[a]) for a in played)
print("solution:", solution, "(solved)" if solved else "(not solved)")
