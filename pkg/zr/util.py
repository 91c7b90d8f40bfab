from argparse import ArgumentParser, ArgumentTypeError, Namespace, RawTextHelpFormatter
from collections.abc import Sequence
from pathlib import Path

from zr.bound import DEFAULT_ITERATIONS, BoundMethod
from zr.datasets import Distribution
from zr.lookup import DEFAULT_REPS
from zr.optimal import DEFAULT_LIMIT
from zr.report import AttackMethod
from zr.report_view import DEFAULT_ROW_COLOR

DB_PATH = Path.home() / ".zahr.db"
FORMATS = ["bin", "txt"]


def seed_range(text: str) -> list[int]:
    """Parse ``"7"``, ``"0-19"`` or ``"1,4,9"`` into a list of seeds; ``""`` is empty."""
    seeds: list[int] = []
    try:
        for part in filter(None, (p.strip() for p in text.split(","))):
            if "-" in part:
                lo, hi = part.split("-", 1)
                seeds.extend(range(int(lo), int(hi) + 1))
            else:
                seeds.append(int(part))
    except ValueError:
        raise ArgumentTypeError(f"invalid seed list: {text!r}")
    return seeds


def float_list(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ArgumentTypeError(f"invalid list of numbers: {text!r}")


def int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ArgumentTypeError(f"invalid list of integers: {text!r}")


def _add_input(parser: ArgumentParser) -> None:
    parser.add_argument("-i", "--input", help="Key file", type=Path, required=True)
    parser.add_argument("-f", "--format", help="Key file format", choices=FORMATS, default="bin")


def _add_budget(parser: ArgumentParser) -> None:
    budget = parser.add_mutually_exclusive_group(required=True)
    budget.add_argument("-l", "--lambda", dest="lam", help="Poisoning budget", type=int)
    budget.add_argument("-p", "--pct", help="Budget as a fraction of n, lambda = round(pct * n)", type=float)


def arg_setup(argv: Sequence[str] | None = None) -> Namespace:
    """parsing of all input arguments"""

    pars = ArgumentParser(
        "zahr.py",
        usage=(
            "%(prog)s  {gen, attack, bound, experiment, lookup-bench, safe-budget, results, version} [options]"
        ),
        formatter_class=RawTextHelpFormatter,
        description="""Poisoning attacks on linear regression over key ranks, and provable bounds

        Usage Examples:
        ~~~~~~~~~~~~~~~
        zahr.py gen -d uniform -n 50 -R 1000 -s 7 -o keys.bin

        zahr.py attack -i keys.txt -f txt -m single -l 1
        zahr.py attack -i keys.bin -m greedy -p 0.1
        zahr.py bound -i keys.bin -m exact -l 5
        zahr.py safe-budget -i keys.bin --factor 1.5
        zahr.py experiment -n 50 -R 1000 --seeds 0-19 --pcts 0.02,0.04,0.06 -o ratios.csv --db ratios.db --run sweep1
        zahr.py results --db ratios.db --run sweep1
        zahr.py lookup-bench -i keys.bin -m greedy -p 0.2 -r 10

        zahr.py version
            """,
    )
    pars.add_argument("-v", "--verbose", help="More log output (-v info, -vv debug)", action="count", default=0)
    subparser = pars.add_subparsers(dest="command")

    # gen ------------------------------
    gen_parser = subparser.add_parser("gen", help="Generate a synthetic key file")
    gen_parser.add_argument("-d", "--distribution", choices=[d.value for d in Distribution], default="uniform")
    gen_parser.add_argument("-n", "--n", help="Requested number of keys", type=int, required=True)
    gen_parser.add_argument("-R", "--range", dest="R", help="Keys are scaled to [0, R]", type=int, required=True)
    gen_parser.add_argument("-s", "--seed", help="Seed of the generator", type=int, default=0)
    gen_parser.add_argument("-o", "--out", help="Output key file", type=Path, required=True)
    gen_parser.add_argument("-f", "--format", help="Key file format", choices=FORMATS, default="bin")

    # attack ------------------------------
    attack_parser = subparser.add_parser("attack", help="Run a poisoning attack and print its report as JSON")
    _add_input(attack_parser)
    attack_parser.add_argument("-m", "--method", choices=[m.value for m in AttackMethod], default="greedy")
    _add_budget(attack_parser)
    attack_parser.add_argument("--limit", help="Enumeration cap", type=int, default=DEFAULT_LIMIT)

    # bound ------------------------------
    bound_parser = subparser.add_parser("bound", help="Upper bound on the loss under any attack")
    _add_input(bound_parser)
    bound_parser.add_argument("-m", "--method", choices=[m.value for m in BoundMethod], default="golden")
    _add_budget(bound_parser)
    bound_parser.add_argument("-T", "--iters", help="Solver iterations", type=int, default=DEFAULT_ITERATIONS)

    # safe-budget ------------------------------
    safe_parser = subparser.add_parser("safe-budget", help="Largest budget whose bound stays under a loss factor")
    _add_input(safe_parser)
    safe_parser.add_argument("--factor", help="Allowed loss amplification (>= 1)", type=float, required=True)
    safe_parser.add_argument("--max-lambda", dest="max_lambda", help="Search limit", type=int, default=1_000_000)
    safe_parser.add_argument("-m", "--method", choices=[m.value for m in BoundMethod], default="golden")
    safe_parser.add_argument("-T", "--iters", help="Solver iterations", type=int, default=DEFAULT_ITERATIONS)

    # experiment ------------------------------
    exp_parser = subparser.add_parser("experiment", help="Ratio experiment over seeds and budgets (CSV)")
    exp_parser.add_argument("-i", "--input", help="Slice this key file instead of sampling", type=Path, default=None)
    exp_parser.add_argument("-f", "--format", help="Key file format", choices=FORMATS, default="bin")
    exp_parser.add_argument("-d", "--distribution", choices=[d.value for d in Distribution], default="uniform")
    exp_parser.add_argument("-n", "--n", dest="ns", help="Key counts, e.g. 50,100", type=int_list, default=[50])
    exp_parser.add_argument("-R", "--range", dest="ranges", help="Ranges, e.g. 1000", type=int_list, default=[1000])
    exp_parser.add_argument("--seeds", help="Seeds, e.g. 0-19 or 1,5,9", type=seed_range, default=[0])
    exp_parser.add_argument(
        "--pcts", help="Poisoning percentages", type=float_list, default=[0.02, 0.04, 0.06, 0.08, 0.10]
    )
    exp_parser.add_argument("--limit", help="Enumeration cap", type=int, default=DEFAULT_LIMIT)
    exp_parser.add_argument("-T", "--iters", help="Solver iterations", type=int, default=DEFAULT_ITERATIONS)
    exp_parser.add_argument("-o", "--out", help="CSV output (stdout if omitted)", type=Path, default=None)
    exp_parser.add_argument("--db", help="Also store rows in this database", type=Path, default=None)
    exp_parser.add_argument("--run", help="Run label used in the database", type=str, default="default")

    # lookup-bench ------------------------------
    bench_parser = subparser.add_parser("lookup-bench", help="Lookup slowdown caused by a poisoned fit (JSON)")
    _add_input(bench_parser)
    bench_parser.add_argument("-m", "--method", choices=[m.value for m in AttackMethod], default="greedy")
    _add_budget(bench_parser)
    bench_parser.add_argument("-r", "--reps", help="Repetitions per configuration", type=int, default=DEFAULT_REPS)
    bench_parser.add_argument("-s", "--seed", help="Seed of the random-poison control", type=int, default=0)

    # results ------------------------------
    results_parser = subparser.add_parser("results", help="List stored experiment rows")
    results_parser.add_argument("--db", help="Database file", type=Path, default=DB_PATH)
    results_parser.add_argument("--run", help="Filter by run label", type=str, default=None)
    results_parser.add_argument("--dataset", help="Filter by dataset label", type=str, default=None)
    results_parser.add_argument("--pct", help="Filter by poisoning percentage", type=float, default=None)
    results_parser.add_argument("--csv", help="Export the rows as CSV instead", type=Path, default=None)
    results_parser.add_argument("--delete", help="Delete the run given by --run", action="store_true")
    results_parser.add_argument(
        "-c",
        "--row_bg_color",
        dest="row_bg_color",
        choices=["no", "light_gray", "dark_gray", "dark_green", "light_green"],
        default=DEFAULT_ROW_COLOR,
        help="Row background color (choices: no, light_gray, dark_gray, dark_green, light_green)",
    )

    # version ------------------------------
    _ = subparser.add_parser("version", help="Print out the current version")

    return pars.parse_args(argv)
