"""Command line entry point: ``subsec {run,verify,check-oracle,opt}``."""
from __future__ import annotations

import argparse
import logging
import sys

from . import kernels
from .algorithm import brute_force_opt, offline_greedy
from .errors import SubsecError
from .harness import SUITES, ExperimentConfig, format_rows, run_experiment, run_suites, write_csv
from .oracles import (NONNEGATIVE_CHECK_MAX_N, SUBMODULAR_CHECK_MAX_N, load_instance,
                      verify_nonnegative, verify_submodular)


def cmd_run(args):
    config = ExperimentConfig.load(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.workers is not None:
        config.workers = args.workers
    report = run_experiment(config)
    write_csv(report, args.out)
    print(f"wrote {len(report.rows)} rows to {args.out}")
    return 0


def cmd_verify(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    rows = run_suites(names, args.trials, args.seed)
    print(format_rows(rows))
    failed = sum(not r.passed for r in rows)
    print(f"{len(rows) - failed}/{len(rows)} checks passed")
    return 0 if failed == 0 else 1


def cmd_check_oracle(args):
    oracle = load_instance(args.instance)
    ok = True
    print(f"{oracle.kind} instance, n={oracle.n}")
    if oracle.n <= SUBMODULAR_CHECK_MAX_N:
        sub = verify_submodular(oracle)
        ok &= sub
        print(f"submodular:  {'yes' if sub else 'NO'}")
    else:
        print(f"submodular:  skipped (n > {SUBMODULAR_CHECK_MAX_N})")
    if oracle.n <= NONNEGATIVE_CHECK_MAX_N:
        nonneg = verify_nonnegative(oracle)
        ok &= nonneg
        print(f"nonnegative: {'yes' if nonneg else 'NO'}")
    else:
        print(f"nonnegative: skipped (n > {NONNEGATIVE_CHECK_MAX_N})")
    return 0 if ok else 1


def cmd_opt(args):
    oracle = load_instance(args.instance)
    opt = brute_force_opt(oracle, oracle.n, args.k)
    greedy = offline_greedy(oracle, oracle.n, args.k)
    print(f"brute-force optimum: {opt.value:.6g} set={list(opt.set)}")
    print(f"offline greedy:      {greedy.value:.6g} set={list(greedy.set)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subsec", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run an experiment config and write a CSV report")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None, help="overrides the config seed (default 0)")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="run the statistical lemma suites")
    p.add_argument("--suite", choices=[*SUITES, "all"], default="all")
    p.add_argument("--trials", type=int, default=None,
                   help="trials per check (default: 200000 for lemma1, 100000 otherwise)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check-oracle", help="exhaustively check submodularity and non-negativity")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_check_oracle)

    p = sub.add_parser("opt", help="print the brute-force optimum and the greedy value")
    p.add_argument("--instance", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_opt)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger(__name__).debug("kernel backend: %s", kernels.BACKEND)
    try:
        return args.func(args)
    except SubsecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
