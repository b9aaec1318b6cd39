"""Command-line front end: ``cubetd {train,eval,symcount,oracle,solve,audit}``.

Exit codes: 0 ok, 1 usage, 2 data or format error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import agent_io
from .cube import (
    Action,
    CubeVariant,
    NotationError,
    apply_moves,
    count_distinct_symmetries,
    default_cube,
    is_solved,
    normalize,
    scramble,
)
from .rng import stream

EXIT_USAGE, EXIT_DATA, EXIT_RESOURCE = 1, 2, 3


class UsageError(Exception):
    pass


def parse_range(text: str) -> list:
    """``"1-14"``, ``"3"`` or ``"1,4,9"``."""
    out = []
    try:
        for part in text.split(","):
            if "-" in part:
                lo, hi = part.split("-")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise UsageError(f"bad range {text!r}") from None
    if not out:
        raise UsageError(f"empty range {text!r}")
    return out


def parse_scramble(text: str) -> list:
    """Any face of the cube with suffix 1, 2 or 3, regardless of metric."""
    moves = []
    for tok in text.split():
        face, suffix = tok[0], tok[1:] or "1"
        if face not in "ULFDRB" or suffix not in ("1", "2", "3"):
            raise NotationError(f"unknown move {tok!r}")
        moves.append(Action(face, int(suffix)))
    return moves


def _out(args, name) -> Path:
    p = Path(name)
    if not p.is_absolute() and args.out_dir:
        p = Path(args.out_dir) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


# --- subcommands ---------------------------------------------------------------------

def cmd_train(args) -> int:
    from .config import load_config
    from .network import NTupleSystem
    from .trainer import train
    cfg = load_config(args.config or "TCL4-p16-ET20-3000k-60-7t")
    tr = cfg.train
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.episodes is not None:
        changes["episodes"] = args.episodes
    if args.eval_interval is not None:
        changes["eval_interval"] = args.eval_interval
    if changes:
        tr = dataclasses.replace(tr, **changes)
        cfg = cfg.replace(train=tr)
    print(cfg.dumps())
    net = NTupleSystem.create(cfg.variant, cfg.representation, cfg.n_tuples, cfg.tuple_length,
                              tr.seed, cfg.network)
    net.provenance.update({"config": cfg.name, "train_seed": tr.seed})
    t0 = time.perf_counter()
    step = max(tr.episodes // 20, 1)

    def progress(done, total, log):
        if not args.quiet and (done % step < tr.chunk or done == total):
            print(f"episodes {done}/{total}  {time.perf_counter() - t0:.0f}s", file=sys.stderr)

    res = train(tr, net, progress)
    out = _out(args, args.output)
    agent_io.save_agent(net, out)
    print(f"agent written to {out} after {time.perf_counter() - t0:.1f}s")
    if res.log.curve:
        curve = out.with_suffix(".curve.csv")
        res.log.write_curve(curve)
        print(f"learning curve written to {curve}")
    if args.log:
        res.log.write_records(_out(args, args.log))
    return 0


def cmd_eval(args) -> int:
    """Rates are averaged over the given agents (replicates of one setting)."""
    from .mcts import WrapConfig, evaluate, write_records
    variant = CubeVariant.from_names(args.size, args.metric) if args.size and args.metric else None
    nets = [agent_io.load_agent(path, variant) for path in args.agent]
    if len({str(n.variant) for n in nets}) > 1:
        raise ValueError("agents were trained for different cube variants")
    ps = parse_range(args.p)
    if min(ps) < 1:
        raise UsageError("p must be >= 1")
    seed = 42 if args.seed is None else args.seed
    results, rows = [], []
    for it in parse_range(args.iterations):
        wrap = WrapConfig(iterations=it, c_puct=args.c_puct, d_max=args.d_max,
                          use_last_mcts=not args.fresh_trees)
        evaluate(nets[0], 1, 1, 1, wrap, args.n_sym, seed)      # compile before timing
        for p in ps:
            rs = [evaluate(n, p, args.batch, args.e_eval, wrap, args.n_sym, seed) for n in nets]
            results.extend(rs)
            rate = float(np.mean([r.solved_rate for r in rs]))
            rows.append({"p": p, "iterations": it, "n_sym": args.n_sym,
                         "solved_rate": f"{rate:.4f}",
                         "mean_moves": f"{np.mean([r.mean_moves for r in rs]):.3f}",
                         "mean_time_ms": f"{np.mean([r.mean_time_ms for r in rs]):.3f}"})
            if not args.quiet:
                print(f"p={p:2d} I={it:4d} solved {rate:.3f}", file=sys.stderr)
    fields = ["p", "iterations", "n_sym", "solved_rate", "mean_moves", "mean_time_ms"]
    target = open(_out(args, args.output), "w", newline="") if args.output else sys.stdout
    w = csv.DictWriter(target, fields)
    w.writeheader()
    w.writerows(rows)
    if target is not sys.stdout:
        target.close()
    if args.records:
        write_records(results, _out(args, args.records))
    return 0


def cmd_symcount(args) -> int:
    variant = CubeVariant.from_names(args.size, args.metric)
    seed = 42 if args.seed is None else args.seed
    rows = []
    for p in parse_range(args.p):
        if p < 0:
            raise UsageError("p must be >= 0")
        if p == 0:
            counts = [count_distinct_symmetries(default_cube(variant))]
        else:
            rng = stream(seed, "symcount", p)
            counts = [count_distinct_symmetries(scramble(variant, p, rng)[0]) for _ in range(args.samples)]
        rows.append({"p": p, "samples": len(counts), "mean_distinct": f"{np.mean(counts):.4f}"})
    target = open(_out(args, args.output), "w", newline="") if args.output else sys.stdout
    w = csv.DictWriter(target, ["p", "samples", "mean_distinct"])
    w.writeheader()
    w.writerows(rows)
    if target is not sys.stdout:
        target.close()
    return 0


def cmd_oracle(args) -> int:
    from .oracle import bfs_enumerate
    variant = CubeVariant.from_names("pocket2", args.metric)
    table = bfs_enumerate(variant, max_bytes=int(args.max_mb * 2**20))
    print(f"{table.count} states, max depth {table.max_depth}")
    print("level sizes: " + " ".join(map(str, table.level_sizes)))
    if args.output:
        out = _out(args, args.output)
        table.export(out)
        table.write_levels(out.with_suffix(".levels.csv"))
        print(f"table written to {out}")
    return 0


def cmd_solve(args) -> int:
    from .mcts import Searcher, WrapConfig, play
    net = agent_io.load_agent(args.agent)
    seed = 42 if args.seed is None else args.seed
    if (args.scramble is None) == (args.p is None):
        raise UsageError("give exactly one of --scramble or --p")
    if args.scramble is not None:
        moves = parse_scramble(args.scramble)
        bad = [str(m) for m in moves if m.face not in net.variant.size.faces]
        if bad:
            raise NotationError(f"{', '.join(bad)}: the 2x2x2 agent only twists U, L and F")
        start = normalize(apply_moves(default_cube(net.variant), moves))
        text = " ".join(str(m) for m in moves)
    else:
        if args.p < 1:
            raise UsageError("p must be >= 1")
        start, seq = scramble(net.variant, args.p, stream(seed, "solve", args.p))
        text = " ".join(str(net.variant.actions[i]) for i in seq)
    print(f"scramble: {text}")
    if is_solved(start):
        print("already solved")
        return 0
    wrap = WrapConfig(iterations=args.iterations, c_puct=args.c_puct)
    searcher = Searcher(net, wrap, args.n_sym, stream(seed, "symmetry"), stream(seed, "tiebreak"))
    if args.iterations == 0:
        from .trainer import greedy_step
        rng = stream(seed, "tiebreak")
        state, played = start, []
        while not is_solved(state) and len(played) < args.e_eval:
            a, state, _ = greedy_step(state, net, args.n_sym, rng)
            played.append(a)
        ok = is_solved(state)
    else:
        ok, played = play(net, np.array(start.sloc), args.e_eval, searcher)
    print("solution: " + " ".join(str(net.variant.actions[a]) for a in played))
    print(f"{'solved' if ok else 'not solved'} in {len(played)} moves")
    return 0


def cmd_audit(args) -> int:
    from .mcts import WrapConfig
    from .oracle import bfs_enumerate, load_table, optimality_audit
    net = agent_io.load_agent(args.agent)
    table = load_table(args.table) if args.table else bfs_enumerate(net.variant)
    seed = 42 if args.seed is None else args.seed
    wrap = WrapConfig(iterations=args.iterations)
    rep = optimality_audit(net, wrap, table, args.samples, p=args.p, seed=seed, e_eval=args.e_eval)
    summary = {"samples": rep.samples, "solved_rate": rep.solved_rate,
               "mean_overhead": rep.mean_overhead, "p50": rep.percentile(50),
               "p90": rep.percentile(90), "max": rep.percentile(100)}
    print(json.dumps(summary, indent=2))
    return 0


# --- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def flags(suppress):
        g = argparse.ArgumentParser(add_help=False)
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        g.add_argument("--seed", type=int, default=d(None), help="run seed (64-bit)")
        g.add_argument("--threads", type=int, default=d(1), help="worker threads (must be >= 1)")
        g.add_argument("--out-dir", default=d(None), help="directory for relative output paths")
        g.add_argument("--config", default=d(None), help="preset name or JSON config file")
        g.add_argument("-q", "--quiet", action="store_true", default=d(False), help="no progress output")
        return g

    # flags are accepted before or after the subcommand
    common, sub_common = flags(False), flags(True)

    ap = argparse.ArgumentParser(prog="cubetd", parents=[common],
                                 description="TD n-tuple agents for the 2x2x2 and 3x3x3 cube")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", parents=[sub_common], help="train an agent from a preset or config")
    p.add_argument("-o", "--output", default="agent.ctd", help="agent file to write")
    p.add_argument("--episodes", type=int, help="override the number of training episodes")
    p.add_argument("--eval-interval", type=int, help="episodes between learning-curve points")
    p.add_argument("--log", help="write per-episode records (JSON lines)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", parents=[sub_common], help="solved rates per p and wrapper setting")
    p.add_argument("agent", nargs="+", help="one or more agent files; rates are averaged")
    p.add_argument("--p", default="1-14", help="scramble depths, e.g. 1-14 or 3,5-6")
    p.add_argument("--iterations", default="0,100", help="MCTS iterations per move; 0 plays greedily")
    p.add_argument("--n-sym", type=int, default=0, help="symmetric states averaged per value")
    p.add_argument("--batch", type=int, default=200, help="cubes per depth")
    p.add_argument("--e-eval", type=int, default=50, help="move budget per cube")
    p.add_argument("--c-puct", type=float, default=1.0, help="PUCT exploration constant")
    p.add_argument("--d-max", type=int, default=50, help="tree depth cap, -1 for none")
    p.add_argument("--fresh-trees", action="store_true", help="no subtree reuse across moves")
    p.add_argument("--size", help="expected cube size (pocket2, rubiks3)")
    p.add_argument("--metric", help="expected metric (htm, qtm)")
    p.add_argument("-o", "--output", help="CSV file instead of stdout")
    p.add_argument("--records", help="per-cube CSV")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("symcount", parents=[sub_common], help="average distinct symmetric states")
    p.add_argument("--size", default="rubiks3", help="pocket2 or rubiks3")
    p.add_argument("--metric", default="qtm", help="htm or qtm")
    p.add_argument("--p", default="0-12", help="scramble depths; 0 is the solved cube")
    p.add_argument("--samples", type=int, default=500, help="scrambles per depth")
    p.add_argument("-o", "--output", help="CSV file instead of stdout")
    p.set_defaults(func=cmd_symcount)

    p = sub.add_parser("oracle", parents=[sub_common], help="2x2x2 breadth-first distance table")
    p.add_argument("--metric", default="qtm", help="htm or qtm")
    p.add_argument("-o", "--output", help="export the table to this file")
    p.add_argument("--max-mb", type=float, default=1024, help="memory budget in MiB")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("solve", parents=[sub_common], help="solve one cube and print the moves")
    p.add_argument("agent", help="agent file")
    p.add_argument("--scramble", help="moves such as \"U L2 F3\"")
    p.add_argument("--p", type=int, help="random scramble of this depth instead")
    p.add_argument("--iterations", type=int, default=100, help="MCTS iterations per move; 0 plays greedily")
    p.add_argument("--n-sym", type=int, default=0, help="symmetric states averaged per value")
    p.add_argument("--c-puct", type=float, default=1.0, help="PUCT exploration constant")
    p.add_argument("--e-eval", type=int, default=50, help="move budget")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("audit", parents=[sub_common], help="solution length against exact distance")
    p.add_argument("agent", help="agent file")
    p.add_argument("--table", help="distance table file (computed when omitted)")
    p.add_argument("--samples", type=int, default=200, help="cubes to audit")
    p.add_argument("--p", type=int, default=14, help="scramble depth")
    p.add_argument("--iterations", type=int, default=100, help="MCTS iterations per move; 0 plays greedily")
    p.add_argument("--e-eval", type=int, default=50, help="move budget per cube")
    p.set_defaults(func=cmd_audit)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MemoryError as e:
        print(f"resource limit: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ValueError, OSError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
