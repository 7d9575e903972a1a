"""Command-line frontend: scenario runs, thrust sweeps, QP debugging, and
config scaffolding.

Exit codes are a stable scripting contract: 0 success, 1 usage/config error,
2 numerical failure. Every output directory gets a run manifest sufficient to
reproduce the exact command.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import __version__, qpsolver
from .config import ConfigError, default_config_text, load_config
from .sim import (
    TRACE_COLUMNS,
    SimulationError,
    run_closed_loop,
    thrust_sweep,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


def _write_trace_csv(path: Path, records) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_COLUMNS)
        for rec in records:
            writer.writerow([repr(v) if isinstance(v, float) else v
                             for v in rec.row()])


def _json_sanitize(obj):
    """Replace non-finite floats with null so the JSON stays strict."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _json_sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_sanitize(v) for v in obj]
    return obj


def _write_json(path: Path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(_json_sanitize(payload), fh, indent=2, default=str)
        fh.write("\n")


def _write_manifest(out_dir: Path, subcommand: str, args: argparse.Namespace,
                    outputs, config_resolved, runtime_s: float) -> None:
    manifest = {
        "tool": "cpwalk",
        "version": __version__,
        "subcommand": subcommand,
        "config_path": str(Path(args.config).resolve()) if getattr(args, "config", None) else None,
        "options": {k: v for k, v in vars(args).items() if k != "func"},
        "outputs": [str(p) for p in outputs],
        "config_resolved": config_resolved,
        "runtime_s": runtime_s,
    }
    _write_json(out_dir / "manifest.json", manifest)


def cmd_simulate(args) -> int:
    t_start = time.perf_counter()
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        result = run_closed_loop(
            cfg.params, cfg.gait, cfg.weights,
            use_qp=not args.no_qp,
            initial_com_m=cfg.scenario.initial_com_m,
            initial_vel_mps=cfg.scenario.initial_vel_mps,
            horizon=cfg.horizon,
        )
    except SimulationError as exc:
        print("simulation failed: %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL
    except OverflowError as exc:
        print("simulation failed (numerical blow-up): %s" % exc, file=sys.stderr)
        return EXIT_NUMERICAL
    trace_path = out_dir / "trace.csv"
    _write_trace_csv(trace_path, result.records)
    clamp_count = sum(any(ev.clamped) for _, ev in result.step_events)
    _write_manifest(out_dir, "simulate", args, [trace_path],
                    cfg.resolved(), time.perf_counter() - t_start)
    print("wrote %s (%d ticks, %d steps, %d clamped steps)"
          % (trace_path, len(result.records), len(result.step_events),
             clamp_count))
    return EXIT_OK


def cmd_sweep_thrust(args) -> int:
    t_start = time.perf_counter()
    try:
        cfg = load_config(args.config)
        thrusts = [float(x) for x in args.thrusts.split(",") if x.strip() != ""]
        if not thrusts:
            raise ConfigError("--thrusts must list at least one value (N)")
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print("config error: bad --thrusts list: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    results = thrust_sweep(
        cfg.params, thrusts, cfg.gait, cfg.weights,
        initial_com_m=cfg.scenario.initial_com_m,
        initial_vel_mps=cfg.scenario.initial_vel_mps,
        horizon=cfg.horizon, jobs=args.jobs, with_records=True,
    )
    rows = [row for row, _ in results]
    outputs = []
    for i, (thrust, (row, records)) in enumerate(zip(thrusts, results)):
        if records is None:
            continue
        csv_path = out_dir / ("run_%02d_thrust_%gN.csv" % (i, thrust))
        _write_trace_csv(csv_path, records)
        outputs.append(csv_path)

    ok_rows = [r for r in rows if r.status == "ok"]
    gains = [r.gain_factor_sqrt_s2pm for r in ok_rows]
    omegas = [r.natural_frequency_radps for r in ok_rows]
    summary = {
        "thrusts_n": thrusts,
        "rows": [asdict(r) for r in rows],
        "gain_factor_strictly_increasing":
            all(b > a for a, b in zip(gains, gains[1:])),
        "natural_frequency_strictly_decreasing":
            all(b < a for a, b in zip(omegas, omegas[1:])),
    }
    summary_path = out_dir / "summary.json"
    _write_json(summary_path, summary)
    outputs.append(summary_path)
    _write_manifest(out_dir, "sweep-thrust", args, outputs,
                    cfg.resolved(), time.perf_counter() - t_start)
    failed = [r for r in rows if r.status != "ok"]
    print("wrote %s (%d runs, %d failed)" % (summary_path, len(rows), len(failed)))
    for r in failed:
        print("  thrust %g N -> %s" % (r.thrust_n, r.status))
    return EXIT_OK


def _parse_matrix_file(path: Path) -> dict:
    """Parse the plain-text QP problem format.

    Sections are introduced by a bare header line (P, c, A_in, b_in) followed
    by rows of whitespace-separated numbers, row-major. Blank lines and lines
    starting with # are ignored. Parse errors cite the offending line number.
    """
    sections = {}
    current = None
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line in ("P", "c", "A_in", "b_in"):
                current = line
                sections.setdefault(current, [])
                continue
            if current is None:
                raise ValueError(
                    "line %d: data before any section header (expected one of "
                    "P, c, A_in, b_in)" % lineno)
            try:
                sections[current].append([float(x) for x in line.split()])
            except ValueError:
                raise ValueError(
                    "line %d: could not parse %r as numbers" % (lineno, line)
                ) from None
    for required in ("P", "c"):
        if required not in sections or not sections[required]:
            raise ValueError("missing required section %r" % required)
    return sections


def cmd_solve_qp(args) -> int:
    if args.random:
        try:
            n, m = (int(x) for x in args.random.split(","))
        except ValueError:
            print("usage error: --random expects 'n,m'", file=sys.stderr)
            return EXIT_USAGE
        rng = np.random.default_rng(args.seed)
        q = rng.normal(size=(n, n))
        P = q.T @ q + 0.1 * np.eye(n)
        c = rng.normal(size=n)
        A = rng.normal(size=(m, n))
        b = A @ rng.normal(size=n) + rng.uniform(0.1, 1.0, size=m)
    else:
        if not args.problem:
            print("usage error: give a problem file or --random n,m",
                  file=sys.stderr)
            return EXIT_USAGE
        try:
            sec = _parse_matrix_file(Path(args.problem))
            P = np.array(sec["P"])
            c = np.concatenate([np.atleast_1d(r) for r in sec["c"]])
            A = np.array(sec.get("A_in") or np.zeros((0, len(c))))
            b = (np.concatenate([np.atleast_1d(r) for r in sec.get("b_in", [])])
                 if sec.get("b_in") else np.zeros(0))
        except (OSError, ValueError) as exc:
            print("problem file error: %s" % exc, file=sys.stderr)
            return EXIT_USAGE
    try:
        prob = qpsolver.QpProblem(P=P, c=c, A_in=A, b_in=b)
    except ValueError as exc:
        print("problem file error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    sol = qpsolver.solve(prob)
    print("status: %s" % sol.status.value)
    print("iterations: %d" % sol.iterations)
    print("u_star: %s" % np.array2string(sol.u_star, precision=12))
    print("objective: %.12g" % prob.objective(sol.u_star))
    print("kkt_stationarity: %.3e" % sol.kkt_stationarity)
    print("kkt_primal_feas: %.3e" % sol.kkt_primal_feas)
    print("kkt_complementarity: %.3e" % sol.kkt_complementarity)
    return EXIT_OK if sol.status is qpsolver.QpStatus.OPTIMAL else EXIT_NUMERICAL


def cmd_init_config(args) -> int:
    path = Path(args.out)
    if path.exists() and not args.force:
        print("refusing to overwrite %s (use --force)" % path, file=sys.stderr)
        return EXIT_USAGE
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(default_config_text())
    print("wrote %s" % path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpwalk",
        description="Thrust-assisted capture-point walking toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_sim = sub.add_parser("simulate", help="run one closed-loop scenario")
    p_sim.add_argument("--config", required=True, help="run configuration file")
    p_sim.add_argument("--out", required=True, help="output directory")
    p_sim.add_argument("--no-qp", action="store_true",
                       help="plain capture-point stepping baseline")
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep-thrust",
                             help="rerun the scenario across thrust values")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--thrusts", required=True,
                         help="comma-separated thrust magnitudes [N]")
    p_sweep.add_argument("--jobs", type=int, default=1,
                         help="parallel workers for the sweep")
    p_sweep.set_defaults(func=cmd_sweep_thrust)

    p_qp = sub.add_parser("solve-qp", help="solve one QP from a matrix file")
    p_qp.add_argument("problem", nargs="?", help="plain-text problem file")
    p_qp.add_argument("--random", metavar="N,M",
                      help="solve a random problem of size n,m instead")
    p_qp.add_argument("--seed", type=int, default=0,
                      help="seed for --random problem generation")
    p_qp.set_defaults(func=cmd_solve_qp)

    p_init = sub.add_parser("init-config",
                            help="write a fully commented default config")
    p_init.add_argument("--out", default="cpwalk.cfg")
    p_init.add_argument("--force", action="store_true")
    p_init.set_defaults(func=cmd_init_config)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
