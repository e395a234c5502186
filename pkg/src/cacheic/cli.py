"""Command-line front end.

Subcommands:
  solve-link       one delivery strategy on one explicit channel
  optimize         placement search at a single coupling value
  sweep            full coupling sweep to CSV or JSON
  calibrate-pmax   size the per-SBS power cap from the fading model

Thread count precedence: --threads flag, then CACHEIC_THREADS, then the
config [run] section.  Identical config + seed reproduce output files byte
for byte; manifests record the config digest alongside each output.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from . import __version__
from .config import (RunManifest, RunTimer, load_config, row_to_dict,
                     write_manifest, write_rows_csv, write_rows_json)
from .hk import solve_hk
from .mimo import cost_mimo_bc, mimo_link_cost
from .model import ChannelState, LinkCost, Strategy, order_by_gain, to_db
from .scenario import calibrate_pmax, sweep
from .solvers import (cost_broadcast, cost_gic, cost_gin, cost_miso,
                      cost_multicast, cost_orthogonal)

_CHANNEL_STRATEGIES = {"gin", "gic", "hk", "mimo"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cacheic",
                                     description="cache-aided interference network planner")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    link = sub.add_parser("solve-link", help="price one strategy on one channel")
    link.add_argument("--strategy", required=True,
                      choices=["mc", "bc", "orth", "miso", "gin", "gic", "hk", "mimo"])
    link.add_argument("--rate", type=float, nargs="+", required=True,
                      metavar="R", help="one rate, or user-1 rate then user-2 rate")
    link.add_argument("--gain", type=float, nargs="*", default=[],
                      metavar="A", help="link gains for mc/bc/orth/miso")
    link.add_argument("--node", choices=["mbs", "sbs1", "sbs2"], default="mbs",
                      help="transmitter for mc/bc")
    link.add_argument("--sbs", type=int, choices=[1, 2], default=1,
                      help="serving SBS for orth")
    link.add_argument("--parts", type=float, nargs=2, metavar=("G1", "G2"),
                      help="per-SBS gain split for miso")
    for flag, default in [("a11", None), ("a12", 0.0), ("a21", 0.0),
                          ("a22", None), ("a10", 0.01), ("a20", 0.01)]:
        link.add_argument(f"--{flag}", type=float, default=default)
    link.add_argument("--out", type=Path)

    opt = sub.add_parser("optimize", help="placement search at one coupling value")
    opt.add_argument("--config", type=Path, required=True)
    opt.add_argument("--mean-c", type=float, default=None,
                     help="coupling value (default: first grid point)")
    opt.add_argument("--seed", type=int, default=None)
    opt.add_argument("--threads", type=int, default=None)
    opt.add_argument("--out", type=Path)

    swp = sub.add_parser("sweep", help="run the configured coupling sweep")
    swp.add_argument("--config", type=Path, required=True)
    swp.add_argument("--out", type=Path)
    swp.add_argument("--format", choices=["csv", "json"], default="csv")
    swp.add_argument("--seed", type=int, default=None)
    swp.add_argument("--threads", type=int, default=None)

    cal = sub.add_parser("calibrate-pmax", help="size the per-SBS power cap")
    cal.add_argument("--config", type=Path, required=True)
    cal.add_argument("--samples", type=int, default=1_000_000)
    cal.add_argument("--seed", type=int, default=None)
    cal.add_argument("--threads", type=int, default=None)
    cal.add_argument("--out", type=Path)
    return parser


def _lc_dict(lc: LinkCost, **extra) -> dict:
    def num(v):
        return v if v is not None and abs(v) != float("inf") else None

    out = {
        "strategy": str(lc.strategy),
        "feasible": lc.feasible,
        "total_power": num(lc.total_power),
        "total_power_db": (round(to_db(lc.total_power), 6)
                           if lc.feasible and lc.total_power > 0 else None),
        "p_tx1": num(lc.p_tx1),
        "p_tx2": num(lc.p_tx2),
        "p_mbs": num(lc.p_mbs),
        "mbs_used": lc.mbs_used,
    }
    out.update(extra)
    return out


def _need(args, names):
    for name in names:
        if getattr(args, name) is None:
            raise ValueError(f"--{name} is required for strategy {args.strategy}")


def _channel(args) -> ChannelState:
    _need(args, ["a11", "a22"])
    return ChannelState(a11=args.a11, a12=args.a12, a21=args.a21,
                        a22=args.a22, a10=args.a10, a20=args.a20)


def _solve_link(args) -> dict:
    strat, rates, gains = args.strategy, args.rate, args.gain

    def want(n_rates, n_gains=0):
        if len(rates) != n_rates:
            raise ValueError(f"strategy {strat} takes {n_rates} --rate value(s)")
        if strat not in _CHANNEL_STRATEGIES and len(gains) != n_gains:
            raise ValueError(f"strategy {strat} takes {n_gains} --gain value(s)")

    if strat == "mc":
        want(1, 1)
        return _lc_dict(cost_multicast(rates[0], gains[0], node=args.node))
    if strat == "bc":
        want(2, 2)
        rp, ap, rm, am = order_by_gain(rates[0], gains[0], rates[1], gains[1])
        return _lc_dict(cost_broadcast(rp, rm, ap, am, node=args.node))
    if strat == "orth":
        want(2, 2)
        return _lc_dict(cost_orthogonal(rates[0], gains[0], rates[1], gains[1],
                                        sbs=args.sbs))
    if strat == "miso":
        want(2, 2)
        parts = tuple(args.parts) if args.parts else None
        return _lc_dict(cost_miso(rates[0], gains[0], rates[1], gains[1],
                                  a_parts=parts))
    if strat == "gin":
        want(2)
        return _lc_dict(cost_gin(rates[0], rates[1], _channel(args)))
    if strat == "gic":
        want(1)
        return _lc_dict(cost_gic(rates[0], _channel(args)))
    if strat == "hk":
        want(2)
        res = solve_hk(rates[0], rates[1], _channel(args))
        lc = LinkCost.of(Strategy.GIWC, p_tx1=res.p_tx1, p_tx2=res.p_tx2)
        return _lc_dict(lc, evaluations=res.evaluations, probes=res.probes)
    if strat == "mimo":
        want(2)
        rep = cost_mimo_bc(rates[0], rates[1], _channel(args))
        return _lc_dict(mimo_link_cost(rates[0], rates[1], _channel(args)),
                        order=list(rep.order), sum_power_dual=rep.sum_power)
    raise ValueError(f"unknown strategy {strat}")


def _emit(payload: dict | list, out: Path | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _scenario_from(args):
    run_cfg = load_config(args.config)
    sc = run_cfg.scenario
    seed = args.seed if args.seed is not None else sc.seed
    threads = args.threads
    if threads is None:
        env = os.environ.get("CACHEIC_THREADS")
        threads = int(env) if env else sc.threads
    return run_cfg, dataclasses.replace(sc, seed=seed, threads=threads)


def _manifest(args, run_cfg, timer, outputs) -> None:
    if not outputs:
        return
    manifest = RunManifest(command=args.command, config_path=run_cfg.path,
                           config_sha256=run_cfg.sha256,
                           seed=getattr(args, "seed", None) or run_cfg.scenario.seed,
                           version=__version__, wall_time_s=timer.wall_time_s,
                           outputs=[str(o) for o in outputs])
    write_manifest(manifest, outputs[0])


def _run_optimize(args) -> int:
    run_cfg, sc = _scenario_from(args)
    mean_c = args.mean_c if args.mean_c is not None else sc.grid[0]
    sc = dataclasses.replace(sc, grid=(mean_c,))
    with RunTimer() as timer:
        rows = sweep(sc)
    by_mode = {}
    for row in rows:
        d = row_to_dict(row)
        if row.mode not in by_mode or d["q_linear"] < by_mode[row.mode]["q_linear"]:
            by_mode[row.mode] = d
    payload = {"mean_c": mean_c,
               "best": {str(m): d for m, d in by_mode.items()},
               "rows": [row_to_dict(r) for r in rows]}
    _emit(payload, args.out)
    _manifest(args, run_cfg, timer, [args.out] if args.out else [])
    return 0


def _run_sweep(args) -> int:
    run_cfg, sc = _scenario_from(args)
    with RunTimer() as timer:
        rows = sweep(sc)
    writer = write_rows_csv if args.format == "csv" else write_rows_json
    if args.out is None:
        writer(rows, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            writer(rows, fh)
        _manifest(args, run_cfg, timer, [args.out])
    return 0


def _run_calibrate(args) -> int:
    run_cfg, sc = _scenario_from(args)
    with RunTimer() as timer:
        policy = calibrate_pmax(sc.fading, sc.catalog,
                                outage_target=run_cfg.outage_target,
                                n_samples=args.samples, seed=sc.seed)
    payload = {
        "p_max": policy.p_max,
        "p_max_db": round(to_db(policy.p_max), 6),
        "outage_target": policy.outage_target,
        "alpha_infeasible_rate": policy.alpha_infeasible_rate,
        "calibration_instance": policy.calibration_instance,
        "n_samples": args.samples,
        "seed": sc.seed,
    }
    _emit(payload, args.out)
    _manifest(args, run_cfg, timer, [args.out] if args.out else [])
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "solve-link":
            _emit(_solve_link(args), args.out)
            return 0
        if args.command == "optimize":
            return _run_optimize(args)
        if args.command == "sweep":
            return _run_sweep(args)
        if args.command == "calibrate-pmax":
            return _run_calibrate(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
