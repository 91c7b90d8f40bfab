"""Ratio experiments: every attack and the bound on the same instances.

One :class:`RatioRow` is produced per (dataset, seed, poisoning percentage).
The exact enumerations only fill their columns when the instance fits under
the enumeration cap; any other failure is written to the row's ``error``
column and the sweep carries on.
"""

import csv
import logging
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

import numpy as np
from tqdm import tqdm

from zr.attacks import run_attack
from zr.bound import DEFAULT_ITERATIONS, BoundMethod, upper_bound
from zr.datasets import Distribution, SliceSpec, SynthSpec, generate, load_slice
from zr.errors import InputError, SearchSpaceTooLarge, ZahrError
from zr.keys import KeySet
from zr.optimal import DEFAULT_LIMIT
from zr.report import AttackMethod
from zr.stats import stats_of

logger = logging.getLogger(__name__)

CSV_HEADER = (
    "seed",
    "dataset",
    "pct",
    "mse_L",
    "mse_G",
    "mse_segE",
    "mse_segE_H",
    "mse_OPT",
    "mse_ROPT",
    "mse_UB",
    "rho_G",
    "rho_R",
    "rho_UB",
    "error",
)

DEFAULT_METHODS = frozenset(
    {
        AttackMethod.GREEDY,
        AttackMethod.SEGE_EXACT,
        AttackMethod.SEGE_HEURISTIC,
        AttackMethod.OPTIMAL,
        AttackMethod.OPTIMAL_RELAXED,
    }
)

# relative slack for the greedy ≤ optimal ≤ relaxed ≤ bound chain
SANDWICH_SLACK = 1e-9


@dataclass(slots=True, frozen=True)
class ExperimentSpec:
    """Sweep definition; ``path`` selects file slices, otherwise ``distribution`` is sampled."""

    seeds: tuple[int, ...]
    pcts: tuple[float, ...]
    distribution: Distribution = Distribution.UNIFORM
    path: Path | None = None
    format: str = "bin"
    ns: tuple[int, ...] = (50,)
    ranges: tuple[int, ...] = (1000,)
    methods: frozenset[AttackMethod] = DEFAULT_METHODS
    limit: int = DEFAULT_LIMIT
    iterations: int = DEFAULT_ITERATIONS
    bound_method: BoundMethod = BoundMethod.GOLDEN

    def __post_init__(self) -> None:
        if not self.pcts:
            raise InputError("at least one poisoning percentage is required")
        for pct in self.pcts:
            if not 0 < pct <= 1:
                raise InputError(f"poisoning percentage {pct} outside (0, 1]")

    def sources(self) -> Iterator[tuple[str, Callable[[int], KeySet]]]:
        """``(label, seed -> KeySet)`` for every dataset of the sweep."""
        if self.path is not None:
            for n in self.ns:
                label = SliceSpec(self.path, n, 0, self.format).label
                yield label, lambda seed, n=n: load_slice(SliceSpec(self.path, n, seed, self.format))
            return
        for n in self.ns:
            for r in self.ranges:
                label = SynthSpec(self.distribution, 0, r, n).label
                yield label, lambda seed, n=n, r=r: generate(SynthSpec(self.distribution, seed, r, n))


@dataclass(slots=True)
class RatioRow:
    seed: int
    dataset: str
    pct: float
    mse_L: float | None = None
    mse_G: float | None = None
    mse_segE: float | None = None
    mse_segE_H: float | None = None
    mse_OPT: float | None = None
    mse_ROPT: float | None = None
    mse_UB: float | None = None
    error: str = ""

    @property
    def rho_G(self) -> float | None:
        return _ratio(self.mse_G, self.mse_OPT)

    @property
    def rho_R(self) -> float | None:
        return _ratio(self.mse_OPT, self.mse_ROPT)

    @property
    def rho_UB(self) -> float | None:
        return _ratio(self.mse_ROPT, self.mse_UB)

    def sort_key(self) -> tuple[str, int, float]:
        return self.dataset, self.seed, self.pct

    def sandwich_violations(self) -> list[str]:
        """Adjacent pairs of the loss chain that are out of order beyond the slack."""
        chain = [
            (name, value)
            for name, value in (
                ("mse_G", self.mse_G),
                ("mse_OPT", self.mse_OPT),
                ("mse_ROPT", self.mse_ROPT),
                ("mse_UB", self.mse_UB),
            )
            if value is not None
        ]
        return [
            f"{lo_name} > {hi_name}"
            for (lo_name, lo), (hi_name, hi) in zip(chain, chain[1:])
            if lo > hi * (1 + SANDWICH_SLACK)
        ]


def _ratio(num: float | None, den: float | None) -> float | None:
    if num is None or den is None or den == 0:
        return None
    return num / den


class _RowErrors:
    def __init__(self, row: RatioRow) -> None:
        self.row = row
        self.messages: list[str] = []

    def measure(self, name: str, compute: Callable[[], float]) -> float | None:
        """Run one column; the cap leaves the column blank, other failures are recorded."""
        try:
            return compute()
        except SearchSpaceTooLarge as err:
            logger.debug("%s skipped for %s seed %d: %s", name, self.row.dataset, self.row.seed, err)
        except ZahrError as err:
            logger.warning("%s failed for %s seed %d: %s", name, self.row.dataset, self.row.seed, err)
            self.messages.append(f"{name}: {err}")
        return None


def budget_for(pct: float, n: int) -> int:
    return round(pct * n)


def measure_row(keys: KeySet, row: RatioRow, spec: ExperimentSpec) -> RatioRow:
    """Fill every loss column of ``row`` for the instance ``keys``."""
    lam = budget_for(row.pct, keys.n)
    errors = _RowErrors(row)

    def attack(method: AttackMethod) -> float | None:
        if method not in spec.methods:
            return None
        return errors.measure(str(method), lambda: run_attack(keys, method, lam, spec.limit).mse_after)

    row.mse_L = errors.measure("clean", lambda: stats_of(keys.keys).mse())
    row.mse_G = attack(AttackMethod.GREEDY)
    row.mse_segE = attack(AttackMethod.SEGE_EXACT)
    row.mse_segE_H = attack(AttackMethod.SEGE_HEURISTIC)
    row.mse_OPT = attack(AttackMethod.OPTIMAL)
    row.mse_ROPT = attack(AttackMethod.OPTIMAL_RELAXED)
    row.mse_UB = errors.measure("bound", lambda: upper_bound(keys, lam, spec.bound_method, spec.iterations).value)

    if row.mse_ROPT is not None and keys.n >= 3 and lam > 0:
        relaxed = errors.measure("sege_relaxed", lambda: run_attack(keys, AttackMethod.SEGE_RELAXED, lam).mse_after)
        if relaxed is not None and relaxed != row.mse_ROPT:
            logger.warning(
                "counterexample: relaxed Seg+E %.17g differs from the relaxed optimum %.17g (%s seed %d, lambda %d)",
                relaxed,
                row.mse_ROPT,
                row.dataset,
                row.seed,
                lam,
            )

    for violation in row.sandwich_violations():
        logger.warning("sandwich chain violated for %s seed %d pct %g: %s", row.dataset, row.seed, row.pct, violation)
    row.error = "; ".join(errors.messages)
    return row


def run_experiment(spec: ExperimentSpec) -> list[RatioRow]:
    """Measure every (dataset, seed, pct) combination of ``spec``.

    Returns:
        Rows sorted by ``(dataset, seed, pct)``.
    """
    sources = list(spec.sources())
    rows: list[RatioRow] = []
    with tqdm(total=len(sources) * len(spec.seeds) * len(spec.pcts), desc="Experiment rows") as bar:
        for label, load in sources:
            for seed in spec.seeds:
                try:
                    keys = load(seed)
                except (ZahrError, OSError) as err:
                    logger.warning("dataset %s seed %d unusable: %s", label, seed, err)
                    rows.extend(RatioRow(seed, label, pct, error=f"dataset: {err}") for pct in spec.pcts)
                    bar.update(len(spec.pcts))
                    continue
                for pct in spec.pcts:
                    rows.append(measure_row(keys, RatioRow(seed, label, pct), spec))
                    bar.update(1)
    return sorted(rows, key=RatioRow.sort_key)


def _cell(value: float | None) -> str:
    return "" if value is None else "%.17g" % value


def row_cells(row: RatioRow) -> list[str]:
    return [
        str(row.seed),
        row.dataset,
        repr(row.pct),
        _cell(row.mse_L),
        _cell(row.mse_G),
        _cell(row.mse_segE),
        _cell(row.mse_segE_H),
        _cell(row.mse_OPT),
        _cell(row.mse_ROPT),
        _cell(row.mse_UB),
        _cell(row.rho_G),
        _cell(row.rho_R),
        _cell(row.rho_UB),
        row.error,
    ]


def write_csv(rows: Iterable[RatioRow], fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row_cells(row))


def complexity_exponent(sizes: Sequence[float], seconds: Sequence[float]) -> float:
    """Slope of ``log(seconds)`` against ``log(size)`` by least squares."""
    slope, _ = np.polyfit(np.log(np.asarray(sizes, dtype=float)), np.log(np.asarray(seconds, dtype=float)), 1)
    return float(slope)
