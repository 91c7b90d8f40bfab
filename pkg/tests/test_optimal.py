import random

import pytest

from tests.helpers import free_interior, random_keyset
from zr.bound import BoundMethod, upper_bound
from zr.errors import SearchSpaceTooLarge
from zr.greedy import greedy_attack
from zr.keys import KeySet
from zr.optimal import BlockAllocation, optimal_attack, optimal_attack_bruteforce, optimal_attack_relaxed
from zr.report import PoisonCounts
from zr.stats import stats_of

SLACK = 1 + 1e-9


def test_block_allocation_decoding(seven_keys: KeySet) -> None:
    # 6 gaps; slot 12 is the unused share
    alloc = BlockAllocation.from_slots((0, 0, 11, 12), gaps=6)
    assert alloc.right == (2, 0, 0, 0, 0, 0)
    assert alloc.left == (0, 0, 0, 0, 0, 1)
    assert alloc.unused == 1
    assert alloc.poisons(seven_keys) == (3, 4, 38)


def test_block_allocation_overflowing_gap(seven_keys: KeySet) -> None:
    # the gap between 11 and 13 holds a single free integer
    assert BlockAllocation.from_slots((2, 3), gaps=6).poisons(seven_keys) is None
    assert BlockAllocation.from_slots((2,), gaps=6).poisons(seven_keys) == (12,)


def test_optimal_beats_greedy(seven_keys: KeySet) -> None:
    report = optimal_attack(seven_keys, 2)
    assert report.poisons.points == (37, 38)
    assert report.mse_after > greedy_attack(seven_keys, 2).mse_after


def test_optimal_on_symmetric_keys(symmetric_keys: KeySet) -> None:
    report = optimal_attack(symmetric_keys, 2)
    assert report.poisons.points == (8, 56)


def test_zero_budget(seven_keys: KeySet) -> None:
    report = optimal_attack(seven_keys, 0)
    assert report.poisons.points == ()
    assert report.mse_after == report.mse_before


def test_limit_guard(seven_keys: KeySet) -> None:
    with pytest.raises(SearchSpaceTooLarge) as err:
        optimal_attack(seven_keys, 3, limit=10)
    assert err.value.limit == 10
    with pytest.raises(SearchSpaceTooLarge):
        optimal_attack_relaxed(seven_keys, 3, limit=10)
    with pytest.raises(SearchSpaceTooLarge):
        optimal_attack_bruteforce(seven_keys, 3, limit=10)


def test_structured_enumeration_matches_brute_force() -> None:
    rng = random.Random(99)
    for _ in range(200):
        keys = random_keyset(rng, 8, rng.randint(6, 48), n_min=2)
        lam = rng.randint(1, 3)
        if not free_interior(keys):
            continue
        structured = optimal_attack(keys, lam)
        brute = optimal_attack_bruteforce(keys, lam)
        assert structured.mse_after == brute.mse_after
        structured.poisons.validate(keys)
        assert len(structured.poisons) <= lam


def test_relaxed_optimum_saturates_budget() -> None:
    rng = random.Random(4)
    for _ in range(200):
        keys = random_keyset(rng, 8, 100, n_min=2)
        lam = rng.randint(1, 4)
        full = optimal_attack_relaxed(keys, lam)
        free = optimal_attack_relaxed(keys, lam, saturate=False)
        assert full.mse_after == free.mse_after
        assert isinstance(full.poisons, PoisonCounts)
        assert len(full.poisons) == lam
        assert stats_of([*keys.keys, *full.poisons.values()]).mse() == full.mse_after


def test_sandwich_chain_on_small_instances() -> None:
    rng = random.Random(31)
    for _ in range(60):
        keys = random_keyset(rng, 8, 48)
        lam = rng.randint(1, 3)
        if len(free_interior(keys)) < lam:
            continue
        greedy = greedy_attack(keys, lam).mse_after
        opt = optimal_attack(keys, lam).mse_after
        ropt = optimal_attack_relaxed(keys, lam).mse_after
        assert greedy <= opt <= ropt
        for method in BoundMethod:
            assert ropt <= upper_bound(keys, lam, method).value * SLACK
