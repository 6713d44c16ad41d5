"""
Command-line driver for simulations, solves and studies.

Usage:
    certest simulate --kind stereo --n-landmarks 10 --output graph.json
    certest solve graph.json --redundant --fisher
    certest solve graph.json --local
    certest sweep --config sweep.json --output results/aligned
    certest cov-study --config scenario.json --trials 500
    certest learn-constraints --template rotation --output learned.json
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from app.config import settings
from src.errors import CertestError
from src.estimation import (
    closed_form_initialization,
    gauss_newton_localize,
    gauss_newton_slam,
    slam_initialization,
)
from src.experiments import (
    Scenario,
    ScenarioKind,
    SweepConfig,
    covariance_study,
    emit_results,
    fisher_report,
    generate_scenario,
    run_sweep,
    solve_instance,
)
from src.learning import (
    ProblemTemplate,
    TemplateKind,
    learn_constraints,
    learned_problem,
    sample_feasible,
)
from src.problems import (
    PoseModel,
    graph_from_json,
    graph_objective,
    graph_to_json,
    problem_to_json,
)
from src.sdp import SolverOptions

log = logging.getLogger(__name__)


def _write(text: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(text + "\n")
        return
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    log.info(f"Wrote {path}")


def _scenario(args: argparse.Namespace) -> Scenario:
    values = {}
    if args.config:
        values = json.loads(Path(args.config).read_text())
    overrides = {
        "kind": args.kind,
        "n_landmarks": args.n_landmarks,
        "noise_std": args.noise_std,
        "anisotropy": args.anisotropy,
        "distance": args.distance,
        "seed": args.seed,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    return Scenario.model_validate(values)


def cmd_simulate(args: argparse.Namespace) -> None:
    graph, _ = generate_scenario(_scenario(args))
    _write(graph_to_json(graph, indent=2), args.output)


def _solve_local(graph) -> dict:
    if graph.is_slam:
        result = gauss_newton_slam(graph, slam_initialization(graph))
    else:
        result = gauss_newton_localize(graph, closed_form_initialization(graph))
    landmarks = result.landmarks
    return {
        "method": "gauss-newton",
        "converged": result.converged,
        "iterations": result.iterations,
        "cost": result.final_cost,
        "grad_norm": result.grad_norm,
        "poses": [PoseModel.from_pose(p).model_dump() for p in result.poses],
        "landmarks": None if landmarks is None else landmarks.tolist(),
    }


def cmd_solve(args: argparse.Namespace) -> None:
    graph = graph_from_json(Path(args.graph).read_text())
    if args.local:
        report = _solve_local(graph)
    else:
        options = SolverOptions(tol=args.tol, max_iter=args.max_iter)
        result = solve_instance(graph, redundant=args.redundant, options=options)
        report = {"method": "sdp", **result.summary()}
        report["objective"] = graph_objective(
            graph, result.estimate.poses, result.estimate.landmarks
        )
        if args.fisher:
            report["fisher"] = fisher_report(result).summary()
    _write(json.dumps(report, indent=2), args.output)


def cmd_sweep(args: argparse.Namespace) -> None:
    values = json.loads(Path(args.config).read_text()) if args.config else {}
    if args.seeds is not None:
        values["seeds"] = args.seeds
    if args.redundant:
        values["redundant"] = True
    config = SweepConfig.model_validate(values)
    workers = min(args.workers or settings.certest_threads, settings.certest_threads)
    result = run_sweep(config, workers=max(1, workers))
    output = args.output or str(Path(settings.results_dir) / "sweep")
    emit_results(result, output)
    log.info(
        f"Sweep finished: {result.tight_fraction:.0%} of cells tight, "
        f"boundary {[(round(b.y, 3), b.x) for b in result.boundary]}"
    )


def cmd_cov_study(args: argparse.Namespace) -> None:
    scenario = _scenario(args)
    if ScenarioKind(scenario.kind) == ScenarioKind.SLAM_STEREO:
        raise CertestError("cov-study needs a localization scenario")
    report = covariance_study(scenario, args.trials, redundant=args.redundant)
    _write(json.dumps(report.summary(), indent=2), args.output)


def cmd_learn(args: argparse.Namespace) -> None:
    template = ProblemTemplate(
        kind=TemplateKind(args.template),
        n_poses=args.n_poses,
        n_landmarks=args.n_landmarks,
    )
    dim = template.layout().dim
    n_samples = args.samples or dim * (dim + 1) + 10
    samples = sample_feasible(template, n_samples, np.random.default_rng(args.seed))
    learned = learn_constraints(samples, threshold=args.threshold)
    log.info(f"Learned {len(learned)} constraints from {n_samples} samples")
    _write(problem_to_json(learned_problem(learned, samples.layout)), args.output)


def _add_scenario_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Scenario JSON file")
    parser.add_argument("--kind", choices=[k.value for k in ScenarioKind])
    parser.add_argument("--n-landmarks", type=int)
    parser.add_argument("--noise-std", type=float)
    parser.add_argument("--anisotropy", type=float)
    parser.add_argument("--distance", type=float)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--output", help="Output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="certest",
        description="Certifiable matrix-weighted pose estimation",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="Emit a simulated graph as JSON")
    _add_scenario_args(simulate)
    simulate.set_defaults(func=cmd_simulate)

    solve = sub.add_parser("solve", help="Solve a graph JSON file")
    solve.add_argument("graph", help="Graph JSON file")
    solve.add_argument("--redundant", action="store_true")
    solve.add_argument("--local", action="store_true", help="Gauss-Newton only")
    solve.add_argument("--fisher", action="store_true", help="Add the FIM report")
    solve.add_argument("--tol", type=float, default=1e-10)
    solve.add_argument("--max-iter", type=int, default=1000)
    solve.add_argument("--output", help="Output file (default stdout)")
    solve.set_defaults(func=cmd_solve)

    sweep = sub.add_parser("sweep", help="Run a tightness sweep")
    sweep.add_argument("--config", help="SweepConfig JSON file")
    sweep.add_argument("--seeds", type=int)
    sweep.add_argument("--redundant", action="store_true")
    sweep.add_argument("--workers", type=int, help="Capped by CERTEST_THREADS")
    sweep.add_argument("--output", help="Output prefix for .csv and .json")
    sweep.set_defaults(func=cmd_sweep)

    cov = sub.add_parser("cov-study", help="Monte-Carlo covariance study")
    _add_scenario_args(cov)
    cov.add_argument("--trials", type=int, default=1000)
    cov.add_argument("--redundant", action="store_true")
    cov.set_defaults(func=cmd_cov_study)

    learn = sub.add_parser("learn-constraints", help="Learn constraints by sampling")
    learn.add_argument(
        "--template", choices=[t.value for t in TemplateKind], default="rotation"
    )
    learn.add_argument("--n-poses", type=int, default=1)
    learn.add_argument("--n-landmarks", type=int, default=2)
    learn.add_argument("--samples", type=int)
    learn.add_argument("--threshold", type=float, default=1e-10)
    learn.add_argument("--seed", type=int, default=0)
    learn.add_argument("--output", help="Output file (default stdout)")
    learn.set_defaults(func=cmd_learn)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.log_level,
        format="%(asctime)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%dT%H:%M:%S",
    )
    try:
        args.func(args)
    except (CertestError, ValueError, OSError) as e:
        log.error(f"{args.command} failed: {e}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
