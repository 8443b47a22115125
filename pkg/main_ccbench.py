import argparse
import logging
import os
import sys

import harness
import helper_funcs
import scenarios as sc

"""
author:
ccbench maintainers

date:
2024

.. description::
Command line front-end of the congestion-control benchmark. Verbs:

    list-scenarios   print (and optionally pin) the scenario grid of a benchmark
    run              simulate, score and rank a benchmark, write the results bundle
    score            rescore a stored results bundle, optionally with a new alpha
    rank             print the ranking of a stored results bundle
    sweep            run a buffer-size or min-RTT sweep at fixed capacity

Exit codes: 0 full success, 2 partial cell failures, 1 configuration error.
"""

logger = logging.getLogger("ccbench")


# ----------------------------------------------------------------------------------------------------------------------
# ARGUMENT PARSING -----------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def _float_list(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma separated list of numbers, got %s" % text)


def _str_list(text: str) -> list:
    return [x.strip() for x in text.split(",") if x.strip()]


def parse_args(argv=None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(prog="main_ccbench.py",
                                     description="Congestion-control benchmark on a simulated bottleneck link")
    parser.add_argument("--pars", default=helper_funcs.default_pars_file, help="parameter file (.ini)")
    parser.add_argument("--verbose", action="store_true", help="debug logging and progress output")

    subparsers = parser.add_subparsers(dest="command")
    subparsers.required = True

    grid_parent = argparse.ArgumentParser(add_help=False)
    grid_parent.add_argument("--bws", type=_float_list, help="capacities [Mbps], e.g. 12,48")
    grid_parent.add_argument("--min-rtts", type=_float_list, help="minimum RTTs [ms], e.g. 10,40")
    grid_parent.add_argument("--qs", type=_float_list, help="buffer sizes [x BDP], e.g. 1,4")
    grid_parent.add_argument("--step-multipliers", type=_float_list, help="step capacity multipliers, e.g. 0.5,2")

    p_list = subparsers.add_parser("list-scenarios", parents=[grid_parent], help="print the scenario grid")
    p_list.add_argument("--benchmark", default="ccbench1", choices=harness.BENCHMARKS)
    p_list.add_argument("--manifest", help="write the scenarios to this manifest file")

    p_run = subparsers.add_parser("run", parents=[grid_parent], help="run a benchmark")
    p_run.add_argument("--benchmark", default="ccbench1", choices=harness.BENCHMARKS)
    p_run.add_argument("--schemes", type=_str_list, help="comma separated scheme ids (default: required roster)")
    p_run.add_argument("--alpha", type=float, help="throughput exponent of the power score")
    p_run.add_argument("--parallel", type=int, help="number of worker processes")
    p_run.add_argument("--out", help="output directory of the results bundle")
    p_run.add_argument("--manifest", help="pinned scenario manifest to run instead of the grid")
    p_run.add_argument("--plot", action="store_true", help="write the ranking plot")

    p_score = subparsers.add_parser("score", help="rescore a stored results bundle")
    p_score.add_argument("--out", required=True, help="directory of the results bundle")
    p_score.add_argument("--alpha", type=float, help="new throughput exponent")
    p_score.add_argument("--plot", action="store_true", help="write the ranking plot")

    p_rank = subparsers.add_parser("rank", help="print the ranking of a stored results bundle")
    p_rank.add_argument("--out", required=True, help="directory of the results bundle")

    p_sweep = subparsers.add_parser("sweep", help="run a buffer-size or min-RTT sweep")
    p_sweep.add_argument("--kind", required=True, choices=harness.SWEEP_KINDS)
    p_sweep.add_argument("--schemes", type=_str_list, required=True, help="comma separated scheme ids")
    p_sweep.add_argument("--bw", type=float, default=48.0, help="capacity [Mbps]")
    p_sweep.add_argument("--min-rtt", type=float, default=40.0, help="minimum RTT of the buffer sweep [ms]")
    p_sweep.add_argument("--qs", type=float, default=5.0, help="buffer of the min-RTT sweep [x BDP]")
    p_sweep.add_argument("--points", type=_float_list, help="swept values, kB for buffer or ms for min_rtt")
    p_sweep.add_argument("--duration", type=float, default=30.0, help="sending time [s]")
    p_sweep.add_argument("--alpha", type=float, default=2.0, help="throughput exponent of the power score")
    p_sweep.add_argument("--parallel", type=int, default=1, help="number of worker processes")
    p_sweep.add_argument("--out", help="output directory")
    p_sweep.add_argument("--plot", action="store_true", help="write the sweep plot")

    return parser.parse_args(argv)


def _grid_overrides(args: argparse.Namespace) -> dict:
    grid = {"bws_mbps": args.bws,
            "min_rtts_ms": args.min_rtts,
            "qs_multipliers": args.qs,
            "step_multipliers": args.step_multipliers}
    return {key: value for key, value in grid.items() if value is not None}


# ----------------------------------------------------------------------------------------------------------------------
# COMMANDS -------------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def cmd_list_scenarios(args: argparse.Namespace, pars: dict) -> int:
    config = harness.RunConfig.from_pars(pars, benchmark=args.benchmark, grid=_grid_overrides(args))
    scenario_list, meta = harness.materialize_scenarios(config)

    for scenario in scenario_list:
        print(scenario.id)

    logger.info("%i scenarios in benchmark %s" % (len(scenario_list), args.benchmark))

    if args.manifest:
        sc.save_manifest(scenario_list, args.manifest, meta)
        logger.info("Manifest written to %s" % args.manifest)

    return 0


def cmd_run(args: argparse.Namespace, pars: dict) -> int:
    config = harness.RunConfig.from_pars(pars,
                                         benchmark=args.benchmark,
                                         schemes=args.schemes,
                                         grid=_grid_overrides(args),
                                         alpha=args.alpha,
                                         parallel=args.parallel,
                                         out_dir=args.out,
                                         manifest=args.manifest)

    # the default output folder of the parameter file is relative to the repository
    if args.out is None:
        config.out_dir = os.path.join(helper_funcs.repo_path, config.out_dir or "output")

    bundle = harness.run(config, use_print=args.verbose)
    ranking_frame, _ = harness.report(bundle, out_dir=config.out_dir, plot=args.plot)

    print(ranking_frame.to_string(index=False))
    logger.info("Results written to %s" % config.out_dir)

    return 2 if bundle.partial else 0


def cmd_score(args: argparse.Namespace, pars: dict) -> int:
    bundle = harness.rescore(harness.load_bundle(args.out), alpha=args.alpha)
    harness.save_bundle(bundle, args.out)
    ranking_frame, _ = harness.report(bundle, out_dir=args.out, plot=args.plot)

    print(ranking_frame.to_string(index=False))

    return 2 if bundle.partial else 0


def cmd_rank(args: argparse.Namespace, pars: dict) -> int:
    bundle = harness.load_bundle(args.out)
    ranking_frame, _ = harness.report(bundle)

    print(ranking_frame.to_string(index=False))

    return 0


def cmd_sweep(args: argparse.Namespace, pars: dict) -> int:
    series = harness.sweep(kind=args.kind,
                           schemes=args.schemes,
                           bw_mbps=args.bw,
                           min_rtt_ms=args.min_rtt,
                           qs_multiplier=args.qs,
                           points=args.points,
                           duration=args.duration,
                           alpha=args.alpha,
                           parallel=args.parallel,
                           sim_pars=pars.get("sim_pars"),
                           out_dir=args.out,
                           plot=args.plot,
                           use_print=args.verbose)

    print(series.to_string(index=False))

    return 2 if (series["result_status"] != 0).any() else 0


COMMANDS = {"list-scenarios": cmd_list_scenarios,
            "run": cmd_run,
            "score": cmd_score,
            "rank": cmd_rank,
            "sweep": cmd_sweep}


# ----------------------------------------------------------------------------------------------------------------------
# MAIN FUNCTION --------------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

def main(argv=None) -> int:
    # argparse exits with 2 on usage errors, here 2 means partial cell failures
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1

    helper_funcs.setup_logging(verbose=args.verbose)

    try:
        pars = helper_funcs.import_pars(args.pars)
        return COMMANDS[args.command](args, pars)

    except (ValueError, RuntimeError) as exc:
        logger.error(str(exc))
        return 1


# ----------------------------------------------------------------------------------------------------------------------
# MAIN FUNCTION CALL ---------------------------------------------------------------------------------------------------
# ----------------------------------------------------------------------------------------------------------------------

if __name__ == '__main__':
    sys.exit(main())
