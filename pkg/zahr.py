#!/usr/bin/env python3
import json
import logging
import sys
import time
from argparse import Namespace
from collections.abc import Callable, Sequence

from zr import __version__ as zr_version, db
from zr.attacks import run_attack
from zr.bound import max_safe_budget, upper_bound
from zr.datasets import SynthSpec, generate, read_keyset, write_keys
from zr.errors import DataFileError, InputError, SearchSpaceTooLarge
from zr.experiment import ExperimentSpec, run_experiment, write_csv
from zr.keys import KeySet
from zr.lookup import run_bench
from zr.report_view import print_rows
from zr.util import arg_setup

logger = logging.getLogger("zahr")

EXIT_INPUT = 2
EXIT_SEARCH_SPACE = 3
EXIT_IO = 4


def setup_logging(verbosity: int) -> None:
    """Log to stderr so that JSON and CSV on stdout stay parseable."""
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2))


def budget(args: Namespace, keys: KeySet) -> int:
    """``--lambda`` as given, or ``round(pct * n)`` for ``--pct``."""
    if args.lam is not None:
        if args.lam < 0:
            raise InputError(f"budget must be non-negative, got {args.lam}")
        return args.lam
    if not 0 <= args.pct <= 1:
        raise InputError(f"poisoning percentage {args.pct} outside [0, 1]")
    return round(args.pct * keys.n)


def handle_gen(args: Namespace) -> None:
    """Sample a synthetic key set and write it as a key file.

    Prints the number of keys and the extremes after deduplication.
    """
    keys = generate(SynthSpec(args.distribution, args.seed, args.R, args.n))
    write_keys(args.out, keys, args.format)
    print(f"n={keys.n} min={keys.first} max={keys.last}")


def handle_attack(args: Namespace) -> None:
    """Run one attack on a key file and print the report as JSON."""
    keys = read_keyset(args.input, args.format)
    lam = budget(args, keys)

    begin = time.perf_counter()
    report = run_attack(keys, args.method, lam, args.limit)
    payload = report.to_dict()
    payload["n"] = keys.n
    payload["seconds"] = time.perf_counter() - begin
    print_json(payload)


def handle_bound(args: Namespace) -> None:
    """Print the upper bound on the loss for the given budget as JSON."""
    keys = read_keyset(args.input, args.format)
    lam = budget(args, keys)

    begin = time.perf_counter()
    result = upper_bound(keys, lam, args.method, args.iters)
    payload = result.to_dict()
    payload.update(n=keys.n, budget=lam, seconds=time.perf_counter() - begin)
    print_json(payload)


def handle_safe_budget(args: Namespace) -> None:
    """Print the largest budget whose bound stays within ``factor`` times the clean loss."""
    keys = read_keyset(args.input, args.format)
    lam = max_safe_budget(keys, args.factor, args.method, args.iters, args.max_lambda)
    print_json({"n": keys.n, "factor": args.factor, "max_lambda": args.max_lambda, "safe_budget": lam})


def handle_experiment(args: Namespace) -> None:
    """Run a ratio experiment and emit its rows as CSV.

    Rows also go to the database when ``--db`` is given.
    """
    spec = ExperimentSpec(
        seeds=tuple(args.seeds),
        pcts=tuple(args.pcts),
        distribution=args.distribution,
        path=args.input,
        format=args.format,
        ns=tuple(args.ns),
        ranges=tuple(args.ranges),
        limit=args.limit,
        iterations=args.iters,
    )
    rows = run_experiment(spec)

    if args.out is None:
        write_csv(rows, sys.stdout)
    else:
        with args.out.open("w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)

    if args.db is not None:
        session_factory = db.create_engine_and_session(str(args.db))
        with session_factory() as session:
            stored = db.insert_rows(session, args.run, rows)
        print(f"{stored} rows stored as run '{args.run}' in {args.db}", file=sys.stderr)


def handle_lookup_bench(args: Namespace) -> None:
    """Benchmark lookups under clean, attacked and randomly poisoned fits (JSON)."""
    keys = read_keyset(args.input, args.format)
    report = run_bench(keys, budget(args, keys), args.method, args.reps, args.seed)
    print_json(report.to_dict())


def handle_results(args: Namespace) -> None:
    """List, export or delete stored experiment rows."""
    if not args.db.exists():
        print(f"Database not found: {args.db}")
        return

    session_factory = db.create_engine_and_session(str(args.db))
    with session_factory() as session:
        if args.delete:
            if args.run is None:
                print("Missing run label for delete.")
                return
            removed = db.delete_run(session, args.run)
            print(f"Run '{args.run}' removed ({removed} rows)!")
            return
        rows = db.get_rows(session, run_id=args.run, dataset=args.dataset, pct=args.pct)

    if args.csv is not None:
        with args.csv.open("w", encoding="utf-8", newline="") as fh:
            write_csv(rows, fh)
        print(f"{len(rows)} rows exported to {args.csv}")
        return
    print_rows(rows, alternate_row_color=args.row_bg_color)


def handle_version(args: Namespace) -> None:
    """Print the current Zahr application version."""
    print(f"Current version: {zr_version}")


def handle_default(args: Namespace) -> None:
    """Display usage instructions for the Zahr CLI.

    This function is called when no valid command is provided.
    """
    print("\t\tUsage: ./zahr.py -h\n")


COMMANDS: dict[str, Callable[[Namespace], None]] = {
    "gen": handle_gen,
    "attack": handle_attack,
    "bound": handle_bound,
    "safe-budget": handle_safe_budget,
    "experiment": handle_experiment,
    "lookup-bench": handle_lookup_bench,
    "results": handle_results,
    "version": handle_version,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Main entry point for the Zahr CLI application.

    Dispatches the parsed command to its handler and maps errors to exit
    codes: 2 for invalid input, 3 for an exceeded enumeration cap and 4 for
    unusable files.
    """
    args = arg_setup(argv)
    setup_logging(args.verbose)
    try:
        COMMANDS.get(args.command, handle_default)(args)
    except SearchSpaceTooLarge as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_SEARCH_SPACE
    except (DataFileError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_IO
    except (InputError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT
    return 0


if __name__ == "__main__":
    sys.exit(main())
