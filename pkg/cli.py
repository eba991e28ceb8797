"""
QUBE command line.

    python cli.py train --phase 1 --seed 7 --out models/phase1.qube --metrics phase1.csv
    python cli.py solve --models models --scramble "F U R2 D'" --trace
    python cli.py eval --models models --episodes 1000 --max-scramble 50 --out eval.csv
    python cli.py verify --strict --depth 4
    python cli.py report --phase-metrics 1 phase1.csv --eval eval.csv --out report.pdf
    python cli.py dashboard

Exit codes: 0 success, 1 failed check/evaluation or solver error, 2 usage or config error.
"""
import argparse
import logging
import os
import sys
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

import config
from qube.cube_core import CubeState, solved
from qube.ddqn import train_phase
from qube.errors import ConfigError, QubeError
from qube.net_diagram import render_net
from qube.neural import save_model
from qube.oracle import reachable_invariant_scan
from qube.pipeline import evaluate_full, load_phase_models, model_path, solve
from qube.rubik_group import Move, apply_sequence, format_moves, group_property_report, parse_moves, phase_action_set
from utils.data_helpers import load_eval_csv, load_metrics_csv
from utils.pdf_generator import create_pdf
from utils.run_config import load_run_config

logger = logging.getLogger("qube.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


# =============================================================================
# Commands
# =============================================================================

def cmd_train(args: argparse.Namespace) -> int:
    run_config = load_run_config(args.config)
    cfg = run_config.phase(args.phase)
    rng = np.random.default_rng(args.seed)

    model, metrics = train_phase(cfg, rng, args.episodes, run_config.coeffs, stop_at=args.stop_at)

    out = args.out or model_path(config.DEFAULT_MODELS_DIR, args.phase)
    os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
    save_model(model, out, args.phase)
    logger.info(f"Saved phase {args.phase} model to {out}")

    if args.metrics:
        metrics.to_csv(args.metrics, index=False)
        logger.info(f"Wrote {len(metrics)} episode rows to {args.metrics}")

    tail = metrics.tail(config.MOVING_WINDOW)
    print(f"phase {args.phase}: {len(metrics)} episodes, last {len(tail)} solved {tail['solved'].mean():.1%}")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    run_config = load_run_config(args.config)
    scramble_moves = parse_moves(args.scramble)
    start = apply_sequence(solved(), scramble_moves)
    models = load_phase_models(args.models)

    if args.trace or args.trace_moves:
        print(f"after scramble ({len(scramble_moves)} moves):")
        print(render_net(start))

    last_state: Dict[int, CubeState] = {}

    def on_move(phase: int, move: Move, state: CubeState) -> None:
        last_state[phase] = state
        if args.trace_moves:
            print(f"phase {phase}: {move}")
            print(render_net(state))

    result = solve(start, models, run_config.phases, scramble_len=len(scramble_moves),
                   coeffs=run_config.coeffs, on_move=on_move)

    for phase, moves in result.phase_moves.items():
        status = "ok" if result.phase_success[phase] else "FAILED"
        print(f"phase {phase} [{status}] ({len(moves)}): {format_moves(moves)}")
        if args.trace and not args.trace_moves and phase in last_state:
            print(render_net(last_state[phase]))

    if result.success:
        print(f"solved in {result.total_moves} moves")
        return EXIT_OK
    print(f"not solved: phase {result.failure_phase} did not reach its goal")
    return EXIT_FAILURE


def cmd_eval(args: argparse.Namespace) -> int:
    run_config = load_run_config(args.config)
    models = load_phase_models(args.models)
    report = evaluate_full(
        models, run_config.phases,
        n=args.episodes,
        max_scramble=args.max_scramble,
        seed=args.seed,
        min_scramble=args.min_scramble,
        workers=args.workers,
        coeffs=run_config.coeffs,
    )
    if args.out:
        report.to_csv(args.out)
        logger.info(f"Wrote evaluation table to {args.out}")

    for phase in config.PHASES:
        print(f"phase {phase} success: {report.phase_success(phase):.3f}")
    print(f"total success: {report.total_success:.3f}")

    if args.target is not None and report.total_success < args.target:
        logger.error(f"Total success {report.total_success:.3f} is below the target {args.target:.3f}")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    report = group_property_report()
    print(report.to_text())
    passed = report.passed

    if args.depth > 0:
        action_sets = [("generators", phase_action_set(1))]
        if args.strict:
            action_sets += [(f"phase {p}", phase_action_set(p)) for p in config.PHASES[1:]]
        for label, actions in action_sets:
            scan = reachable_invariant_scan(args.depth, actions)
            print(f"[{label}]")
            print(scan.to_text())
            passed = passed and scan.passed

    if not passed:
        logger.error("Verification failed")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    metrics: Dict[int, pd.DataFrame] = {}
    for phase, path in args.phase_metrics or []:
        phase = int(phase)
        if phase not in config.PHASES:
            raise ConfigError(f"Unknown phase {phase} for {path}")
        metrics[phase] = load_metrics_csv(path)
    eval_df = load_eval_csv(args.eval) if args.eval else None
    if not metrics and eval_df is None:
        raise ConfigError("Nothing to report: pass --phase-metrics and/or --eval")

    run_data = config.get_default_run_data()
    run_data['name'] = args.name or run_data['name']
    run_data['author'] = args.author or run_data['author']
    payload = create_pdf(run_data, metrics, eval_df)
    with open(args.out, "wb") as f:
        f.write(payload)
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_dashboard(args: argparse.Namespace) -> int:
    from streamlit.web import cli as stcli

    base_path = os.path.dirname(os.path.abspath(__file__))
    sys.argv = ["streamlit", "run", os.path.join(base_path, "app.py"), "--global.developmentMode=false"]
    return stcli.main()


# =============================================================================
# Parser
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qube", description="Four-phase DDQN Rubik's cube solver")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one phase agent")
    p.add_argument("--phase", type=int, required=True, choices=list(config.PHASES))
    p.add_argument("--config", help="run config file (key = value)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--episodes", type=int, default=config.DEFAULT_TRAIN_EPISODES)
    p.add_argument("--out", help="model file (default models/phaseN.qube)")
    p.add_argument("--metrics", help="per-episode metrics CSV")
    p.add_argument("--stop-at", type=float, help="stop once the moving success rate reaches this value")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("solve", help="solve a scramble with trained models")
    p.add_argument("--models", default=config.DEFAULT_MODELS_DIR)
    p.add_argument("--scramble", required=True, help='e.g. "F U R2 D\'"')
    p.add_argument("--config")
    p.add_argument("--trace", action="store_true", help="print the net after the scramble and each phase")
    p.add_argument("--trace-moves", action="store_true", help="print the net after every move")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("eval", help="evaluate the full solver over a scramble-length sweep")
    p.add_argument("--models", default=config.DEFAULT_MODELS_DIR)
    p.add_argument("--config")
    p.add_argument("--episodes", type=int, default=config.DEFAULT_EVAL_EPISODES)
    p.add_argument("--min-scramble", type=int, default=config.DEFAULT_MIN_SCRAMBLE)
    p.add_argument("--max-scramble", type=int, default=config.DEFAULT_MAX_SCRAMBLE)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=config.DEFAULT_EVAL_WORKERS)
    p.add_argument("--out", help="evaluation CSV")
    p.add_argument("--target", type=float, help=f"fail below this total success (e.g. {config.DEFAULT_TARGET_SUCCESS})")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="check generator tables and scan reachable states")
    p.add_argument("--depth", type=int, default=3, help="scan depth; 0 skips the scan")
    p.add_argument("--strict", action="store_true", help="also scan with every phase action set")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="write a PDF report from metrics and evaluation CSVs")
    p.add_argument("--phase-metrics", nargs=2, action="append", metavar=("PHASE", "CSV"))
    p.add_argument("--eval", help="evaluation CSV")
    p.add_argument("--name")
    p.add_argument("--author")
    p.add_argument("--out", default="qube_report.pdf")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("dashboard", help="launch the Streamlit dashboard")
    p.set_defaults(func=cmd_dashboard)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    )

    try:
        return args.func(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_USAGE
    except QubeError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILURE
    except (ValueError, OSError) as e:
        logger.error(f"{e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
