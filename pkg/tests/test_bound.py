import random

import pytest

from tests.helpers import random_keyset
from zr.bound import (
    DEFAULT_ITERATIONS,
    BoundMethod,
    candidate_quadratics,
    max_safe_budget,
    upper_bound,
    upper_bound_binary,
    upper_bound_exact,
    upper_bound_golden,
)
from zr.datasets import Distribution, SynthSpec, generate
from zr.envelope import QuadraticFn
from zr.errors import InputError, InvalidBracket
from zr.experiment import budget_for
from zr.greedy import greedy_attack
from zr.keys import KeySet
from zr.stats import stats_of

SWEEP_PCTS = (0.02, 0.04, 0.06, 0.08, 0.10)


def test_candidate_count(seven_keys: KeySet) -> None:
    keys = KeySet((1, 5, 9))
    assert len(candidate_quadratics(keys, 2)) == 6
    assert len(candidate_quadratics(seven_keys, 3)) == 1 + 5 + 1 + 4
    assert len(candidate_quadratics(seven_keys, 0)) == 1


def test_zero_budget_is_the_clean_loss(seven_keys: KeySet) -> None:
    (only,) = candidate_quadratics(seven_keys, 0)
    clean = stats_of(seven_keys.keys).mse()
    assert only.vertex_value == pytest.approx(clean, rel=1e-12)
    for method in BoundMethod:
        assert upper_bound(seven_keys, 0, method).value == pytest.approx(clean, rel=1e-9)


def test_candidate_minima_are_relaxed_losses() -> None:
    rng = random.Random(8)
    for _ in range(50):
        keys = random_keyset(rng, 12, 500)
        lam = rng.randint(1, 6)
        fns = candidate_quadratics(keys, lam)
        k = keys.keys
        multisets = [[k[0]] * lam]
        multisets += [[k[i]] * lam for i in range(1, keys.n - 1)]
        multisets.append([k[-1]] * lam)
        multisets += [[k[0]] * a + [k[-1]] * (lam - a) for a in range(lam + 1)]
        for fn, poisons in zip(fns, multisets, strict=True):
            expected = stats_of([*k, *poisons]).mse()
            assert fn.vertex_value == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_two_crossing_parabolas() -> None:
    fns = [QuadraticFn(1.0, 0.0, 0.0), QuadraticFn(1.0, -4.0, 4.0)]
    for result in (upper_bound_golden(fns), upper_bound_binary(fns), upper_bound_exact(fns)):
        assert result.value == pytest.approx(1.0, abs=1e-9)
        assert result.w_star == pytest.approx(1.0, abs=1e-4)


def test_binary_on_a_single_parabola() -> None:
    fns = [QuadraticFn(1.0, -2.0, 3.0)]
    result = upper_bound_binary(fns)
    assert result.value == pytest.approx(2.0, rel=1e-9)
    assert result.w_star == pytest.approx(1.0, abs=1e-4)
    assert result.method is BoundMethod.BINARY


def test_binary_rejects_bad_brackets() -> None:
    fns = [QuadraticFn(1.0, 0.0, 0.0), QuadraticFn(1.0, -4.0, 4.0)]
    with pytest.raises(InvalidBracket):
        upper_bound_binary(fns, y_lo=2.0, y_hi=1.5)
    with pytest.raises(InvalidBracket):
        upper_bound_binary(fns, y_lo=0.0, y_hi=0.5)
    assert upper_bound_binary(fns, y_lo=0.5, y_hi=3.0).value == pytest.approx(1.0, abs=1e-9)


def test_solvers_agree_on_sweep_instances() -> None:
    for seed in range(20):
        keys = generate(SynthSpec(Distribution.UNIFORM, seed, 1000, 50))
        for pct in SWEEP_PCTS:
            lam = budget_for(pct, keys.n)
            exact = upper_bound(keys, lam, BoundMethod.EXACT, DEFAULT_ITERATIONS).value
            golden = upper_bound(keys, lam, BoundMethod.GOLDEN, DEFAULT_ITERATIONS).value
            binary = upper_bound(keys, lam, BoundMethod.BINARY, DEFAULT_ITERATIONS).value
            assert golden == pytest.approx(exact, rel=0, abs=1e-9)
            assert binary == pytest.approx(exact, rel=0, abs=1e-9)


def test_bound_dominates_greedy() -> None:
    rng = random.Random(21)
    for _ in range(20):
        keys = random_keyset(rng, 40, 800, n_min=10)
        lam = rng.randint(1, 4)
        greedy = greedy_attack(keys, lam).mse_after
        for method in BoundMethod:
            assert greedy <= upper_bound(keys, lam, method).value * (1 + 1e-9)


def test_bound_result_to_dict(seven_keys: KeySet) -> None:
    payload = upper_bound(seven_keys, 2, BoundMethod.EXACT).to_dict()
    assert payload["method"] == "exact"
    assert set(payload) == {"method", "value", "w_star"}


def test_safe_budget_limits(seven_keys: KeySet) -> None:
    with pytest.raises(InputError):
        max_safe_budget(seven_keys, 0.5)
    with pytest.raises(InputError):
        max_safe_budget(seven_keys, 2.0, lambda_max=-1)

    assert max_safe_budget(seven_keys, 1e9, lambda_max=8) == 8
    # a single poison already raises the loss
    assert max_safe_budget(seven_keys, 1.0, lambda_max=8) == 0


def test_safe_budget_is_the_last_passing_budget(seven_keys: KeySet) -> None:
    threshold = 3.0 * stats_of(seven_keys.keys).mse()
    lam = max_safe_budget(seven_keys, 3.0, BoundMethod.EXACT, lambda_max=64)
    assert upper_bound(seven_keys, lam, BoundMethod.EXACT).value <= threshold
    if lam < 64:
        assert upper_bound(seven_keys, lam + 1, BoundMethod.EXACT).value > threshold
