import math
import random

import numpy as np
import pytest

from zr.bound import upper_bound_binary, upper_bound_exact
from zr.envelope import (
    PiecewiseQuadratic,
    QuadraticFn,
    crossings,
    merge_envelopes,
    quadratic_roots,
    upper_envelope,
)


def random_family(rng: random.Random, m: int) -> list[QuadraticFn]:
    """Quadratics with positive curvature and a positive minimum."""
    fns = []
    for _ in range(m):
        a2 = rng.uniform(0.1, 5.0)
        vertex = rng.uniform(-10.0, 10.0)
        low = rng.uniform(0.5, 20.0)
        fns.append(QuadraticFn(a2, -2 * a2 * vertex, a2 * vertex * vertex + low))
    return fns


def test_quadratic_roots() -> None:
    assert quadratic_roots(1, -3, 2) == (1.0, 2.0)
    assert quadratic_roots(1, 0, 1) is None
    assert quadratic_roots(1, -2, 1) == (1.0, 1.0)
    assert quadratic_roots(0, 2, -4) == (2.0, 2.0)
    assert quadratic_roots(0, 0, 1) is None


def test_quadratic_fn() -> None:
    f = QuadraticFn(2.0, -8.0, 11.0)
    assert f.vertex == 2.0
    assert f.vertex_value == 3.0
    assert f(0) == 11.0
    assert f.level_interval(11.0) == (0.0, 4.0)
    assert f.level_interval(2.0) is None
    assert f.minimize_on(3.0, math.inf) == (3.0, 5.0)
    assert f.minimize_on(-math.inf, math.inf) == (2.0, 3.0)


def test_crossings_ignore_tangency() -> None:
    f = QuadraticFn(1.0, 0.0, 0.0)
    assert crossings(f, QuadraticFn(1.0, -4.0, 4.0)) == (1.0,)
    assert crossings(f, QuadraticFn(2.0, 0.0, -1.0)) == (-1.0, 1.0)
    assert crossings(f, QuadraticFn(2.0, 0.0, 0.0)) == ()
    assert crossings(f, f) == ()


def test_single_piece() -> None:
    f = QuadraticFn(1.0, 2.0, 3.0)
    env = upper_envelope([f])
    assert env == PiecewiseQuadratic.single(f)
    assert env.minimum() == (-1.0, 2.0)

    with pytest.raises(ValueError):
        upper_envelope([])


def test_two_shifted_parabolas() -> None:
    f = QuadraticFn(1.0, 0.0, 0.0)
    g = QuadraticFn(1.0, -4.0, 4.0)
    env = upper_envelope([f, g])
    assert env.thresholds == (-math.inf, 1.0, math.inf)
    assert env.pieces == (g, f)
    assert env.minimum() == (1.0, 1.0)
    assert env(-3.0) == 25.0


def test_merge_keeps_first_operand_on_ties() -> None:
    f = QuadraticFn(1.0, 0.0, 0.0)
    same = QuadraticFn(1.0, 0.0, 0.0)
    merged = merge_envelopes(PiecewiseQuadratic.single(f), PiecewiseQuadratic.single(same))
    assert len(merged) == 1
    assert merged.pieces[0] is f


def test_nested_parabola_never_appears() -> None:
    outer = QuadraticFn(1.0, 0.0, 5.0)
    inner = QuadraticFn(1.0, 0.0, 1.0)
    env = upper_envelope([inner, outer, inner])
    assert env.pieces == (outer,)


def test_envelope_matches_pointwise_maximum() -> None:
    rng = random.Random(17)
    samples = np.linspace(-30.0, 30.0, 1000)
    for _ in range(100):
        m = rng.randint(1, 30)
        fns = random_family(rng, m)
        env = upper_envelope(fns)

        assert len(env) <= 2 * m - 1
        assert list(env.thresholds) == sorted(env.thresholds)
        for w in samples:
            expected = max(f(w) for f in fns)
            assert env(w) == pytest.approx(expected, rel=1e-9, abs=1e-9)
        # neighbouring pieces meet at their shared threshold
        for k in range(1, len(env)):
            x = env.thresholds[k]
            assert env.pieces[k - 1](x) == pytest.approx(env.pieces[k](x), rel=1e-6, abs=1e-6)


def test_exact_minimum_agrees_with_sampling_and_bisection() -> None:
    rng = random.Random(23)
    grid = np.linspace(-15.0, 15.0, 20001)
    for _ in range(50):
        fns = random_family(rng, rng.randint(2, 25))
        exact = upper_bound_exact(fns)
        env = upper_envelope(fns)
        sampled = min(env(w) for w in grid)
        assert exact.value <= sampled * (1 + 1e-9)

        binary = upper_bound_binary(fns, iterations=80)
        assert binary.value == pytest.approx(exact.value, rel=1e-7)
