"""Lookups through a fitted line plus exponential search, and the slowdown benchmark.

The searchable array always holds the legitimate keys only: poisons change
the model, not the stored data.
"""

import logging
import time
from collections.abc import Sequence
from dataclasses import dataclass, field

from tqdm import tqdm

from zr.attacks import run_attack
from zr.datasets import rng_for
from zr.errors import KeyNotFound
from zr.keys import KeySet
from zr.report import AttackMethod, PoisonSet
from zr.stats import RegressionFit, fit_with_poison

logger = logging.getLogger(__name__)

DEFAULT_REPS = 10


@dataclass(slots=True, frozen=True)
class LookupIndex:
    """Sorted legitimate keys and a line that predicts their positions."""

    keys: tuple[int, ...]
    fit: RegressionFit

    def lookup(self, key: int) -> tuple[int, int]:
        """Return ``(index, probes)`` of ``key``."""
        start = predict_position(self.fit, key, len(self.keys))
        return exponential_search(self.keys, start, key)


@dataclass(slots=True)
class BenchReport:
    """Per-configuration mean lookup time (ns) and mean probe count."""

    n: int
    budget: int
    method: AttackMethod
    reps: int
    mean_ns: dict[str, float] = field(default_factory=dict)
    mean_probes: dict[str, float] = field(default_factory=dict)
    mse: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "budget": self.budget,
            "method": str(self.method),
            "reps": self.reps,
            "mean_ns": self.mean_ns,
            "mean_probes": self.mean_probes,
            "mse": self.mse,
        }


def predict_position(fit: RegressionFit, key: int, length: int) -> int:
    """0-based predicted index: nearest rank (ties to even) minus one, clamped."""
    rank = round(fit.predict(key))
    return min(max(rank - 1, 0), length - 1)


def _lower_bound(arr: Sequence[int], key: int, lo: int, hi: int) -> tuple[int, int]:
    """First index in ``[lo, hi]`` whose value is ``>= key`` (or ``hi``), with probe count."""
    probes = 0
    while lo < hi:
        mid = (lo + hi) // 2
        probes += 1
        if arr[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    return lo, probes


def _found(arr: Sequence[int], key: int, index: int, probes: int) -> tuple[int, int]:
    if not 0 <= index < len(arr) or arr[index] != key:
        raise KeyNotFound(f"key {key} is not stored")
    return index, probes + 1


def binary_search(arr: Sequence[int], key: int) -> tuple[int, int]:
    """Baseline lookup over the whole array; returns ``(index, probes)``."""
    index, probes = _lower_bound(arr, key, 0, len(arr) - 1)
    return _found(arr, key, index, probes)


def exponential_search(arr: Sequence[int], start: int, key: int) -> tuple[int, int]:
    """Find ``key`` by doubling a bracket outward from ``start``, then bisecting it.

    Args:
        arr: Sorted distinct values.
        start: Predicted index, within bounds.
        key: Value to find.
    Returns:
        ``(index, probes)`` where a probe is one comparison against an element.
    Raises:
        KeyNotFound: If ``key`` is not in ``arr``.
    """
    n = len(arr)
    probes = 1
    if arr[start] == key:
        return start, probes

    step = 1
    if arr[start] < key:
        prev = start
        while True:
            idx = start + step
            if idx >= n:
                hi = n - 1
                break
            probes += 1
            if arr[idx] >= key:
                hi = idx
                break
            prev, step = idx, step * 2
        lo = prev + 1
    else:
        prev = start
        while True:
            idx = start - step
            if idx < 0:
                lo = 0
                break
            probes += 1
            if arr[idx] <= key:
                lo = idx
                break
            prev, step = idx, step * 2
        hi = prev - 1

    if lo > hi:
        raise KeyNotFound(f"key {key} is not stored")
    index, extra = _lower_bound(arr, key, lo, hi)
    return _found(arr, key, index, probes + extra)


def random_poisons(keys: KeySet, lam: int, seed: int) -> PoisonSet:
    """``lam`` distinct free interior integers drawn uniformly (all of them if fewer exist)."""
    free = keys.free_interior()
    if free <= lam:
        return PoisonSet(tuple(x for x in range(keys.first + 1, keys.last) if x not in keys))

    rng = rng_for(seed)
    chosen: set[int] = set()
    while len(chosen) < lam:
        batch = rng.integers(keys.first + 1, keys.last, size=2 * (lam - len(chosen)), dtype="uint64")
        for value in batch:
            x = int(value)
            if x not in keys and len(chosen) < lam:
                chosen.add(x)
    return PoisonSet.of(chosen)


def _time_lookups(name: str, keys: tuple[int, ...], search, reps: int) -> tuple[float, float]:
    """Mean nanoseconds and mean probes per lookup of every key, ``reps`` times."""
    total_ns = 0
    total_probes = 0
    for _ in tqdm(range(reps), desc=f"Lookups ({name})", leave=False):
        begin = time.perf_counter_ns()
        results = [search(key) for key in keys]
        total_ns += time.perf_counter_ns() - begin

        for expected, (index, probes) in enumerate(results):
            if index != expected:
                raise RuntimeError(f"{name}: key {keys[expected]} resolved to index {index}")
            total_probes += probes
    lookups = reps * len(keys)
    return total_ns / lookups, total_probes / lookups


def run_bench(
    keys: KeySet,
    lam: int,
    method: AttackMethod = AttackMethod.GREEDY,
    reps: int = DEFAULT_REPS,
    seed: int = 0,
) -> BenchReport:
    """Compare lookup cost under the clean fit, an attacked fit and a random-poison fit.

    Every legitimate key is looked up ``reps`` times per configuration; the
    binary-search baseline ignores the model.

    Args:
        keys: Legitimate keys, also the searchable array.
        lam: Poisoning budget.
        method: Attack producing the poisoned fit.
        reps: Repetitions per configuration.
        seed: Seed of the random-poison control.
    """
    if reps < 1:
        raise ValueError(f"reps must be at least 1, got {reps}")

    attack = run_attack(keys, method, lam)
    fits = {
        "legit": fit_with_poison(keys, ()),
        "attack": fit_with_poison(keys, attack.poisons.values()),
        "random": fit_with_poison(keys, random_poisons(keys, lam, seed).values()),
    }

    report = BenchReport(n=keys.n, budget=lam, method=AttackMethod(method), reps=reps)
    for name, line in fits.items():
        index = LookupIndex(keys.keys, line)
        report.mean_ns[name], report.mean_probes[name] = _time_lookups(name, keys.keys, index.lookup, reps)
        report.mse[name] = line.mse
    report.mean_ns["binary"], report.mean_probes["binary"] = _time_lookups(
        "binary", keys.keys, lambda key: binary_search(keys.keys, key), reps
    )
    logger.info("mean probes %s", report.mean_probes)
    return report
