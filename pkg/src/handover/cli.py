"""Command-line entry point: ``handover {validate,offline,online,adversary,bench}``."""

from __future__ import annotations

import argparse
import json
import sys

from . import adversary, harness
from .events import CoverageError, coverage_timeline
from .geometry import DimensionError
from .io import (
    InputError,
    load_scenario,
    load_solution,
    scenario_to_json,
    solution_to_json,
)
from .offline import CoverageSolution, greedy_offline, greedy_offline_c, validate, validate_c
from .online import TRACKERS, make_tracker

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INPUT = 3
EXIT_CONSTRUCTION = 4

MAX_SEED = 2**64 - 1


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value <= MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _emit(args, text: str):
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _single_trajectory(scenario):
    if scenario.trajectory is None:
        raise InputError("this command needs a scenario with a single trajectory")
    return scenario.trajectory


def cmd_validate(args) -> int:
    scenario = load_scenario(args.scenario)
    traj = _single_trajectory(scenario)
    sol = load_solution(args.solution)
    c = args.coverage or scenario.coverage
    if isinstance(sol, CoverageSolution):
        if sol.c != c:
            raise InputError(f"solution has {sol.c} sequences, coverage is {c}")
        violation = validate_c(scenario.regions, traj, sol)
    else:
        violation = validate(scenario.regions, traj, sol, require_maximality=args.maximality)
    if violation is None:
        _emit(args, _dump({"valid": True}))
        return EXIT_OK
    report = {"valid": False, "kind": violation.kind, "time": violation.time,
              "region_id": violation.region_id, "message": violation.message}
    _emit(args, _dump(report))
    print(f"invalid: {violation}", file=sys.stderr)
    return EXIT_INVALID


def cmd_offline(args) -> int:
    scenario = load_scenario(args.scenario)
    traj = _single_trajectory(scenario)
    c = args.coverage or scenario.coverage
    timeline = coverage_timeline(scenario.regions, traj)
    sol = greedy_offline(timeline) if c == 1 else greedy_offline_c(timeline, c)
    _emit(args, _dump(solution_to_json(sol)))
    return EXIT_OK


def cmd_online(args) -> int:
    scenario = load_scenario(args.scenario)
    traj = _single_trajectory(scenario)
    c = args.coverage or scenario.coverage
    name = args.tracker
    if c > 1 and name != "trilat":
        raise InputError(f"coverage {c} needs the trilat tracker")
    tracker = make_tracker(name, seed=args.seed, coverage=c).fit(scenario.regions)
    _emit(args, _dump(solution_to_json(tracker.predict(traj))))
    return EXIT_OK


def cmd_adversary(args) -> int:
    kind = args.construction
    if kind == "rhombi":
        rc = adversary.rhombi_construction()
        adversary.verify_rhombi(rc)
        res = adversary.run_stateless_adversary(adversary.NearestCenterPolicy, args.rounds, rc)
        doc = scenario_to_json(rc.regions, trajectory=res.trajectory)
    elif kind == "flower":
        fl = adversary.flower(args.ply)
        res = adversary.run_deterministic_adversary(
            lambda: make_tracker(args.tracker, seed=args.seed), args.ply, args.updates or 10 * (args.ply - 1))
        doc = scenario_to_json(fl.regions, trajectory=res.trajectory)
    elif kind == "tree":
        tree = adversary.interval_tree(args.ply)
        doc = scenario_to_json(tree.regions, distribution=tree.distribution)
    else:
        inst = adversary.trilateration_lb(args.ply, args.coverage or 2)
        doc = scenario_to_json(inst.regions, distribution=inst.distribution, coverage=inst.coverage)
    _emit(args, _dump(doc))
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        with open(args.config) as fh:
            data = json.load(fh)
        if args.seed is not None:
            data["seed"] = args.seed
        config = harness.config_from_dict(data)
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        raise InputError(f"bad config {args.config}: {exc}") from exc
    result = harness.run(config)
    text = result.to_csv() if args.format == "csv" else result.to_json() + "\n"
    _emit(args, text)
    if args.format == "csv" and args.output:
        sys.stdout.write(result.to_json() + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def global_flags(p, suppress):
        # subcommands accept the same flags without clobbering values given before them
        default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--seed", type=_seed, default=default(None), help="unsigned 64-bit seed")
        p.add_argument("--output", "-o", default=default(None),
                       help="write the result here instead of stdout")
        p.add_argument("--format", choices=["json", "csv"], default=default("json"))

    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, suppress=True)
    parser = argparse.ArgumentParser(prog="handover",
                                     description="Minimum-handover tracking of a moving point.")
    global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a solution against a scenario")
    p.add_argument("scenario")
    p.add_argument("solution")
    p.add_argument("--maximality", action="store_true", help="also require maximal handovers")
    p.add_argument("--coverage", type=int, default=None)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("offline", parents=[common], help="optimal offline tracking")
    p.add_argument("scenario")
    p.add_argument("--coverage", type=int, default=None)
    p.set_defaults(func=cmd_offline)

    p = sub.add_parser("online", parents=[common], help="run an online tracker")
    p.add_argument("scenario")
    p.add_argument("--tracker", choices=sorted(TRACKERS), default="random")
    p.add_argument("--coverage", type=int, default=None)
    p.set_defaults(func=cmd_online)

    p = sub.add_parser("adversary", parents=[common], help="export a lower-bound construction")
    p.add_argument("--construction", choices=["rhombi", "flower", "tree", "trilat"], required=True)
    p.add_argument("--ply", type=int, default=8)
    p.add_argument("--rounds", type=int, default=10)
    p.add_argument("--updates", type=int, default=None)
    p.add_argument("--coverage", type=int, default=None)
    p.add_argument("--tracker", choices=["det-first"], default="det-first",
                   help="tracker the flower adversary plays against")
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("bench", parents=[common], help="run an experiment config")
    p.add_argument("config")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except adversary.ConstructionError as exc:
        print(f"construction self-check failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION
    except harness.TrialFailure as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID
    except (InputError, CoverageError, DimensionError, harness.ScenarioGenerationError,
            ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
