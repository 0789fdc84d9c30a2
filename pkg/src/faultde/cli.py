"""Command-line front end: curves, thresholds, trajectories, bounds, MC runs.

Every file-producing subcommand writes a `<out>.manifest.json` recording
the exact argv, parameters, and output paths needed to regenerate the file
byte-for-byte.  CSV carries raw values only; pass --plot to also render a
figure next to the data.
"""

from __future__ import annotations

import argparse
import os
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .density_evolution import ChannelSpec, DEConfig, EnsembleSpec, run_de
from .majority import bound_for_gamma
from .mc_simulator import (
    SimConfig,
    graph_to_adjacency_text,
    sample_graph,
    simulate_decode,
    write_per_trial_csv,
)
from .message_code import FaultParams, MessageCodeSpec
from .serialization import fmt, json_pretty, write_csv, write_json
from .threshold import (
    BracketError,
    CurvePoint,
    find_threshold,
    sweep_curve,
    trajectory_field,
    write_curve_csv,
    write_trajectory_field_csv,
)

SEED_ENV_VAR = "FAULTDE_SEED"

BOUND_CSV_HEADER = ("epsilon", "gamma", "converged", "iterations", "bound")
COMPARE_CSV_HEADER = ("epsilon", "de_gamma", "mc_mean", "mc_stddev", "flag")


def _add_de_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--dv", type=int, required=True, help="variable node degree")
    sp.add_argument("--dc", type=int, required=True, help="check node degree")
    sp.add_argument("--alpha", type=float, required=True, help="per-bit fault probability")
    sp.add_argument("--n", type=int, default=2, help="message code length (even)")
    sp.add_argument("--k", type=int, default=1, help="message decision radius")
    sp.add_argument("--max-iters", type=int, default=None, help="DE iteration cap")
    sp.add_argument("--fp-tol", type=float, default=1e-12, help="DE fixed-point tolerance")
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")


def _add_grid_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--eps-start", type=float, required=True)
    sp.add_argument("--eps-end", type=float, required=True)
    sp.add_argument("--eps-step", type=float, required=True)


def _add_mc_flags(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--num-vars", type=int, required=True, help="variable node count")
    sp.add_argument("--iters", type=int, required=True, help="BP iterations per trial")
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"RNG seed (default: ${SEED_ENV_VAR} or 0)",
    )
    sp.add_argument(
        "--regraph", action="store_true", help="sample a fresh graph for every trial"
    )


def _specs(args) -> tuple[EnsembleSpec, FaultParams, MessageCodeSpec]:
    return (
        EnsembleSpec(args.dv, args.dc),
        FaultParams(args.alpha),
        MessageCodeSpec(args.n, args.k),
    )


def _de_config(args, default_max_iters: int = 200_000, record: bool = False) -> DEConfig:
    max_iters = args.max_iters if args.max_iters is not None else default_max_iters
    return DEConfig(max_iters=max_iters, fp_tol=args.fp_tol, record_trajectory=record)


def _grid(args) -> list[float]:
    if args.eps_step <= 0:
        raise ValueError(f"--eps-step must be positive, got {args.eps_step}")
    if args.eps_start > args.eps_end:
        raise ValueError(
            f"empty epsilon grid: --eps-start {args.eps_start} > --eps-end {args.eps_end}"
        )
    count = int((args.eps_end - args.eps_start) / args.eps_step + 1e-9) + 1
    return [args.eps_start + i * args.eps_step for i in range(count)]


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    return int(env) if env else 0


def _write_manifest(args, outputs: Sequence[str]) -> None:
    out = Path(outputs[0])
    manifest = {
        "subcommand": args.command,
        "argv": list(args.raw_argv),
        "parameters": {
            key: value
            for key, value in sorted(vars(args).items())
            if key not in ("func", "raw_argv", "command")
        },
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "outputs": list(outputs),
    }
    write_json(out.with_name(out.name + ".manifest.json"), manifest)


def cmd_curve(args) -> int:
    ens, fp, spec = _specs(args)
    points = sweep_curve(ens, fp, spec, _grid(args), _de_config(args), jobs=args.jobs)
    write_curve_csv(points, args.out)
    outputs = [args.out]
    if args.plot:
        from .plotting import save_curve_figure

        label = f"dv={args.dv} dc={args.dc} alpha={args.alpha} n={args.n} k={args.k}"
        save_curve_figure([(label, points)], args.plot)
        outputs.append(args.plot)
    _write_manifest(args, outputs)
    print(f"wrote {args.out} ({len(points)} points)")
    return 0


def cmd_threshold(args) -> int:
    ens, fp, spec = _specs(args)
    result = find_threshold(
        ens,
        fp,
        spec,
        args.bracket_lo,
        args.bracket_hi,
        args.tol,
        _de_config(args, default_max_iters=2_000_000),
    )
    print(json_pretty(result.to_json_dict()))
    if args.out:
        write_json(args.out, result.to_json_dict())
        _write_manifest(args, [args.out])
    return 0


def cmd_trajectory(args) -> int:
    ens, fp, spec = _specs(args)
    cfg = DEConfig(max_iters=args.record, fp_tol=args.fp_tol, record_trajectory=True)
    field = trajectory_field(ens, fp, spec, _grid(args), cfg)
    write_trajectory_field_csv(field, args.out)
    outputs = [args.out]
    if args.plot:
        from .plotting import save_trajectory_figure

        save_trajectory_figure(field, args.plot)
        outputs.append(args.plot)
    _write_manifest(args, outputs)
    print(f"wrote {args.out} ({len(field)} trajectories)")
    return 0


def cmd_majority_bound(args) -> int:
    ens, fp, spec = _specs(args)
    points = sweep_curve(ens, fp, spec, _grid(args), _de_config(args), jobs=args.jobs)
    rows = (
        (fmt(p.epsilon), fmt(bound_for_gamma(p.gamma)), str(int(p.converged)), str(p.iterations), "1")
        for p in points
    )
    write_csv(args.out, BOUND_CSV_HEADER, rows)
    outputs = [args.out]
    if args.plot:
        from .plotting import save_curve_figure

        bound_points = [
            CurvePoint(p.epsilon, bound_for_gamma(p.gamma), p.converged, p.iterations)
            for p in points
        ]
        save_curve_figure([("majority-vote lower bound", bound_points)], args.plot)
        outputs.append(args.plot)
    _write_manifest(args, outputs)
    print(f"wrote {args.out} ({len(points)} points)")
    return 0


def _sim_config(args, ens: EnsembleSpec, fp: FaultParams, spec: MessageCodeSpec, epsilon: float) -> SimConfig:
    return SimConfig(
        ensemble=ens,
        num_vars=args.num_vars,
        iterations=args.iters,
        trials=args.trials,
        seed=_seed(args),
        alpha=fp,
        epsilon=epsilon,
        code=spec,
        regraph_per_trial=args.regraph,
    )


def cmd_mc(args) -> int:
    ens, fp, spec = _specs(args)
    cfg = _sim_config(args, ens, fp, spec, args.epsilon)
    graph = sample_graph(ens, args.num_vars, cfg.seed)
    result = simulate_decode(graph, cfg)
    print(json_pretty(result.to_json_dict()))
    outputs = []
    if args.out:
        write_per_trial_csv(result, args.out)
        outputs.append(args.out)
    if args.graph_out:
        Path(args.graph_out).write_text(graph_to_adjacency_text(graph), encoding="utf-8")
        outputs.append(args.graph_out)
    if outputs:
        _write_manifest(args, outputs)
    return 0


def cmd_compare(args) -> int:
    ens, fp, spec = _specs(args)
    eps_values = sorted(set(args.eps))
    for e in eps_values:
        if not 0.0 <= e <= 1.0:
            raise ValueError(f"--eps {e} outside [0, 1]")
    # match the MC at its finite iteration count, not at the DE fixed point
    de_cfg = DEConfig(max_iters=args.iters, fp_tol=1e-300)
    rows = []
    plot_rows = []
    for eps in eps_values:
        de = run_de(ens, ChannelSpec(eps), spec, fp, de_cfg)
        cfg = _sim_config(args, ens, fp, spec, eps)
        graph = sample_graph(ens, args.num_vars, cfg.seed)
        mc = simulate_decode(graph, cfg)
        if args.trials > 1:
            sigma = mc.error_prob_stddev
            tol = max(3.0 * sigma / args.trials**0.5, 0.01)
            stddev_field = fmt(sigma)
        else:
            sigma = None
            tol = 0.01
            stddev_field = ""
        flagged = abs(mc.error_prob_mean - de.gamma) > tol
        rows.append(
            (fmt(eps), fmt(de.gamma), fmt(mc.error_prob_mean), stddev_field, str(int(flagged)))
        )
        plot_rows.append((eps, de.gamma, mc.error_prob_mean, sigma))
    write_csv(args.out, COMPARE_CSV_HEADER, rows)
    outputs = [args.out]
    if args.plot:
        from .plotting import save_compare_figure

        save_compare_figure(plot_rows, args.plot)
        outputs.append(args.plot)
    _write_manifest(args, outputs)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="faultde",
        description="Density evolution and Monte Carlo analysis of fault erasure BP decoders",
    )
    parser.add_argument("--version", action="version", version=f"faultde {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("curve", help="gamma-vs-epsilon curve as CSV")
    _add_de_flags(sp)
    _add_grid_flags(sp)
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.add_argument("--plot", default=None, help="also render a figure to this path")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("threshold", help="bisect for the fault BP threshold")
    _add_de_flags(sp)
    sp.add_argument("--bracket-lo", type=float, required=True)
    sp.add_argument("--bracket-hi", type=float, required=True)
    sp.add_argument("--tol", type=float, required=True)
    sp.add_argument("--out", default=None, help="optional JSON output path")
    sp.set_defaults(func=cmd_threshold)

    sp = sub.add_parser("trajectory", help="(p0, p1) iteration trajectories as CSV")
    _add_de_flags(sp)
    _add_grid_flags(sp)
    sp.add_argument("--record", type=int, default=100, help="iterations to record per epsilon")
    sp.add_argument("--out", required=True)
    sp.add_argument("--plot", default=None)
    sp.set_defaults(func=cmd_trajectory)

    sp = sub.add_parser("majority-bound", help="majority-voting lower-bound curve as CSV")
    _add_de_flags(sp)
    _add_grid_flags(sp)
    sp.add_argument("--out", required=True)
    sp.add_argument("--plot", default=None)
    sp.set_defaults(func=cmd_majority_bound)

    sp = sub.add_parser("mc", help="Monte Carlo fault BP simulation")
    _add_de_flags(sp)
    _add_mc_flags(sp)
    sp.add_argument("--epsilon", type=float, required=True)
    sp.add_argument("--out", default=None, help="per-trial CSV path")
    sp.add_argument("--graph-out", default=None, help="adjacency text export path")
    sp.set_defaults(func=cmd_mc)

    sp = sub.add_parser("compare", help="DE-vs-MC table at matched iteration count")
    _add_de_flags(sp)
    _add_mc_flags(sp)
    sp.add_argument(
        "--eps", type=float, action="append", required=True, help="epsilon (repeatable)"
    )
    sp.add_argument("--out", required=True)
    sp.add_argument("--plot", default=None)
    sp.set_defaults(func=cmd_compare)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    raw_argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(raw_argv)
    args.raw_argv = raw_argv
    try:
        return args.func(args)
    except BracketError as exc:
        print(f"faultde: bracket error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"faultde: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
