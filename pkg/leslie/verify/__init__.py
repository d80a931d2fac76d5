"""
CLI tool running the identity suites on seeded random states.
"""

import argparse
import math
import sys
from leslie.diagnostics import format_float
from leslie.verify.checks import ALL_CHECKS, build_corpus

EXIT_SUITE_FAILURE = 4


def verify_identities(seed=0, n_points=128, cases=20, length=2 * math.pi):
    """
    Run every suite on a fresh corpus, yielding CheckResults in a fixed order.
    """
    corpus = build_corpus(seed, n_points=n_points, cases=cases, length=length)
    for check in ALL_CHECKS:
        yield from check(corpus)


def summarize(results):
    """
    One (name, passed, total, worst value, tolerance) row per check, in
    first-seen order.
    """
    rows = {}
    for result in results:
        (passed, total, worst, tolerance) = rows.get(result.name, (0, 0, -math.inf, None))
        rows[result.name] = (
            passed + int(result.passed),
            total + 1,
            max(worst, result.value),
            result.tolerance if result.tolerance is not None else tolerance,
        )
    return [(name, *row) for (name, row) in rows.items()]


def print_table(rows, file=sys.stdout):
    """
    Print the pass/fail table; reported-only checks show `report`.
    """
    print("check,status,passed,total,worst,tolerance", file=file)
    for (name, passed, total, worst, tolerance) in rows:
        if tolerance is None:
            status = "report"
        else:
            status = "pass" if passed == total else "FAIL"
        limit = "" if tolerance is None else format_float(tolerance)
        print(
            f"{name},{status},{passed},{total},{format_float(worst)},{limit}", file=file
        )


def run_suites(seed, n_points, cases, file=sys.stdout):
    """
    Run, print the table and return 0 if every suite passed, 4 otherwise.
    """
    results = list(verify_identities(seed, n_points=n_points, cases=cases))
    print_table(summarize(results), file=file)
    if all(result.passed for result in results):
        return 0
    return EXIT_SUITE_FAILURE


def main(args):
    """
    Entrypoint for the CLI tool.
    """
    return run_suites(args.seed, args.n_points, args.cases)


def add_arguments(parser):
    """
    Options shared with the `verify-identities` subcommand.
    """
    parser.add_argument("--seed", type=int, default=0, help="Seed of the random corpus")
    parser.add_argument(
        "--n-points", type=int, default=128, help="Grid points per axis (default 128)"
    )
    parser.add_argument(
        "--cases", type=int, default=20, help="Number of random states (default 20)"
    )


PARSER = argparse.ArgumentParser(
    description="Check the molecular field, stress and admissibility identities"
)
add_arguments(PARSER)
