"""Command-line entry point: ``nphase {sweep,state,mu2,selftest}``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .complementarity import convex_form, find_mu2
from .exceptions import NPhaseError
from .knowledge import DEFAULT_N_GRID, knowledge_report, phase_distribution
from .lindblad import steady_state
from .sweep import PLOT_QUANTITIES, emit_csv, emit_plot, parse_config, parse_params, read_config_text, run_sweep


def _cmd_sweep(args) -> int:
    config = parse_config(read_config_text(args.config))
    out = args.out or config.output_path
    if out is None:
        print("error: no output path (use --out or output_path in the config)", file=sys.stderr)
        return 2
    result = run_sweep(config, workers=args.workers)
    emit_csv(result, out)
    print(f"wrote {out} ({len(result.rows)} rows)")
    if args.plot:
        svg = Path(out).with_suffix(f".{args.plot}.svg")
        emit_plot(result, args.plot, svg)
        print(f"wrote {svg}")
    return 0


def _cmd_state(args) -> int:
    text = read_config_text(args.config)
    params = parse_params(text)
    n_grid = json.loads(text).get("n_grid", DEFAULT_N_GRID)
    rho = steady_state(params)
    rep = knowledge_report(rho, n_grid)
    print(json.dumps({
        "params": params.as_dict(),
        "populations": dict(zip(("p2", "p3", "p3p", "p4p"), rep.populations)),
        "mixedness": rep.mixedness,
        "r_m": rep.r_m,
        "r_phi": rep.r_phi,
    }, indent=2))
    if args.phase_dist:
        phi, P = phase_distribution(rho).grid(n_grid)
        with open(args.phase_dist, "w", newline="") as fh:
            fh.write("phi_radians,P\n")
            for x, y in zip(phi, P):
                fh.write(f"{x:.12g},{y:.12g}\n")
    return 0


def _cmd_mu2(args) -> int:
    res = find_mu2(n_starts=args.starts, seed=args.seed, tol=args.tol, n_jobs=args.jobs)
    p, c = convex_form(res.mu2)
    print(f"mu2 = {res.mu2:.6f}")
    print(f"convex form: p = {p:.4f}, c = {c:.4f}")
    print(f"binding state: R_phi = {res.r_phi_at_min:.6f} bits, R_m = {res.r_m_at_min:.6f} bits")
    print(f"starts = {res.n_starts}, seed = {res.seed}")
    return 0


def _cmd_selftest(args) -> int:
    from .selftest import run

    return 0 if run() else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nphase", description=__doc__)
    ap.add_argument("--version", action="version", version=f"nphase {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sweep", help="sweep probe detuning or signal strength, write CSV")
    sp.add_argument("--config", required=True, help="JSON config path or builtin name (e.g. fig2_row1)")
    sp.add_argument("--out", help="CSV output path (overrides output_path)")
    sp.add_argument("--plot", choices=sorted(PLOT_QUANTITIES), help="also write an SVG plot of this column")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=_cmd_sweep)

    sp = sub.add_parser("state", help="knowledge report for a single parameter point")
    sp.add_argument("--config", required=True)
    sp.add_argument("--phase-dist", help="write P(phi) on the quadrature grid to this CSV")
    sp.set_defaults(func=_cmd_state)

    sp = sub.add_parser("mu2", help="search for the largest admissible mu2")
    sp.add_argument("--starts", type=int, default=200)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--tol", type=float, default=1e-5)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=_cmd_mu2)

    sp = sub.add_parser("selftest", help="run the invariant checks")
    sp.set_defaults(func=_cmd_selftest)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (NPhaseError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
