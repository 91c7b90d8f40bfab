import random

import pytest

from tests.helpers import free_interior, random_keyset
from zr.errors import DegenerateInput, NoFeasiblePoison
from zr.greedy import single_attack_report
from zr.keys import KeySet
from zr.optimal import optimal_attack, optimal_attack_relaxed
from zr.report import PoisonCounts
from zr.sege import (
    SegEOriginal,
    SegERelaxed,
    get_optimal_b,
    sege_exact_original,
    sege_exact_relaxed,
    sege_heuristic_original,
)
from zr.stats import build_prefix_sums, poisoned_stats


def test_symmetric_instance_misses_the_optimum(symmetric_keys: KeySet) -> None:
    report = sege_exact_original(symmetric_keys, 2)
    # {56, 63} is its mirror image with the same loss
    assert report.poisons.points == (1, 8)
    assert report.detail == SegEOriginal(R1=8, L2=None, R2=None, L3=64)
    assert report.mse_after < optimal_attack(symmetric_keys, 2).mse_after


def test_single_poison_budget_matches_single_point_attack() -> None:
    rng = random.Random(6)
    for _ in range(200):
        keys = random_keyset(rng, 10, 60, n_min=2)
        if not free_interior(keys):
            continue
        single = single_attack_report(keys)
        sege = sege_exact_original(keys, 1)
        assert sege.mse_after == max(single.mse_after, single.mse_before)


def test_original_sege_between_single_point_and_optimal() -> None:
    rng = random.Random(13)
    for _ in range(100):
        keys = random_keyset(rng, 8, 40)
        lam = rng.randint(1, 3)
        if not free_interior(keys):
            continue
        sege = sege_exact_original(keys, lam)
        sege.poisons.validate(keys)
        assert len(sege.poisons) <= lam
        assert single_attack_report(keys).mse_after <= sege.mse_after
        assert sege.mse_after <= optimal_attack(keys, lam).mse_after


def test_heuristic_never_beats_exact() -> None:
    rng = random.Random(19)
    checked = 0
    for _ in range(100):
        keys = random_keyset(rng, 12, 200)
        lam = rng.randint(1, 4)
        try:
            heuristic = sege_heuristic_original(keys, lam)
        except NoFeasiblePoison:
            continue
        heuristic.poisons.validate(keys)
        assert heuristic.mse_after <= sege_exact_original(keys, lam).mse_after
        checked += 1
    assert checked > 0


def test_relaxed_matches_brute_force_over_triples() -> None:
    rng = random.Random(27)
    for _ in range(150):
        keys = random_keyset(rng, 10, 300)
        lam = rng.randint(0, 7)
        ps = build_prefix_sums(keys)
        best = max(
            poisoned_stats(ps, a, b, i, lam).mse()
            for a in range(lam + 1)
            for b in range(lam - a + 1)
            for i in range(2, keys.n)
        )
        report = sege_exact_relaxed(keys, lam)
        assert report.mse_after == best

        pattern = report.detail
        assert isinstance(pattern, SegERelaxed)
        assert pattern.a + pattern.b + pattern.c == lam
        assert isinstance(report.poisons, PoisonCounts)
        assert len(report.poisons) == lam


def test_relaxed_sege_reaches_relaxed_optimum() -> None:
    rng = random.Random(4)
    mismatches = []
    checked = 0
    for _ in range(200):
        keys = random_keyset(rng, 8, 100, n_min=2)
        lam = rng.randint(1, 4)
        if keys.n < 3:
            continue
        sege = sege_exact_relaxed(keys, lam).mse_after
        best = optimal_attack_relaxed(keys, lam).mse_after
        assert sege <= best
        if sege != best:
            mismatches.append((keys.keys, lam, sege, best))
        checked += 1
    assert checked > 0
    assert mismatches == []


def test_optimal_b_matches_exhaustive_scan() -> None:
    rng = random.Random(41)
    for _ in range(1000):
        keys = random_keyset(rng, 15, 2000)
        lam = rng.randint(1, 30)
        a = rng.randint(0, lam)
        i = rng.randint(2, keys.n - 1)
        ps = build_prefix_sums(keys)
        losses = [poisoned_stats(ps, a, b, i, lam).mse() for b in range(lam - a + 1)]
        b = get_optimal_b(ps, a, i, lam)
        assert losses[b] == max(losses)


def test_optimal_b_without_room(seven_keys: KeySet) -> None:
    ps = build_prefix_sums(seven_keys)
    assert get_optimal_b(ps, 4, 3, 4) == 0


def test_degenerate_inputs() -> None:
    with pytest.raises(DegenerateInput):
        sege_exact_relaxed(KeySet((0, 10)), 2)
    with pytest.raises(DegenerateInput):
        sege_heuristic_original(KeySet((0, 10)), 2)
    with pytest.raises(NoFeasiblePoison):
        sege_exact_original(KeySet((0, 1, 2, 3)), 2)
