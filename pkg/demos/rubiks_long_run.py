"""Long 3x3x3 runs: learning curves with and without symmetries.

Trains one agent per preset and writes ``<name>.ctd``, ``<name>.curve.csv``
and a wrapped-evaluation CSV into the output directory.  A full preset takes
hours (3M episodes); pass ``--episodes`` for a shorter look.

    python demos/rubiks_long_run.py --out runs/ --episodes 300000
"""
import argparse
import dataclasses
import sys
import time
from pathlib import Path

from cubetd import agent_io
from cubetd.config import load_config
from cubetd.mcts import WrapConfig, evaluate, write_records
from cubetd.network import NTupleSystem
from cubetd.trainer import train

PRESETS = ["TCL4-p13-ET16-3000k-120-7t", "TCL4-p13-ET16-3000k-120-7t-nsym16"]


def run(name, out, episodes, iterations, seed):
    cfg = load_config(name)
    tr = dataclasses.replace(cfg.train, seed=seed, eval_interval=max((episodes or cfg.train.episodes) // 10, 1),
                             **({"episodes": episodes} if episodes else {}))
    net = NTupleSystem.create(cfg.variant, cfg.representation, cfg.n_tuples, cfg.tuple_length, seed,
                              cfg.network)
    t0 = time.perf_counter()
    log = train(tr, net, lambda done, total, _: print(f"{name}: {done}/{total}", file=sys.stderr)).log
    train_s = time.perf_counter() - t0
    agent_io.save_agent(net, out / f"{name}.ctd")
    log.write_curve(out / f"{name}.curve.csv")
    t0 = time.perf_counter()
    results = [evaluate(net, p, cfg.eval.batch, cfg.eval.e_eval, WrapConfig(iterations=iterations),
                        cfg.network.n_sym, seed) for p in range(1, 16)]
    write_records(results, out / f"{name}.I{iterations}.csv")
    rates = " ".join(f"{r.solved_rate:.2f}" for r in results)
    print(f"{name}: train {train_s / 3600:.2f} h, eval {(time.perf_counter() - t0) / 60:.1f} min")
    print(f"  solved p=1..15 at I={iterations}: {rates}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("runs"))
    ap.add_argument("--episodes", type=int, help="override the preset's 3M episodes")
    ap.add_argument("--iterations", type=int, default=100)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--preset", choices=PRESETS, action="append")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name in args.preset or PRESETS:
        run(name, args.out, args.episodes, args.iterations, args.seed)


if __name__ == "__main__":
    main()
