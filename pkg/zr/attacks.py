"""Dispatch from an :class:`AttackMethod` to its implementation."""

from zr.greedy import greedy_attack, single_attack_report
from zr.keys import KeySet
from zr.optimal import DEFAULT_LIMIT, optimal_attack, optimal_attack_relaxed
from zr.report import AttackMethod, AttackReport, PoisonCounts, PoisonSet
from zr.sege import sege_exact_original, sege_exact_relaxed, sege_heuristic_original
from zr.stats import stats_of


def _no_attack(keys: KeySet, method: AttackMethod) -> AttackReport:
    mse = stats_of(keys.keys).mse()
    relaxed = method in (AttackMethod.OPTIMAL_RELAXED, AttackMethod.SEGE_RELAXED)
    poisons = PoisonCounts((0,) * keys.n, keys.keys) if relaxed else PoisonSet()
    return AttackReport(method, 0, poisons, mse, mse)


def run_attack(keys: KeySet, method: AttackMethod, lam: int, limit: int = DEFAULT_LIMIT) -> AttackReport:
    """Run ``method`` with budget ``lam``; a zero budget yields an empty attack.

    ``limit`` only applies to the enumerating methods; the single-point
    attack ignores ``lam``.
    """
    method = AttackMethod(method)
    if lam == 0 and method is not AttackMethod.SINGLE:
        return _no_attack(keys, method)

    match method:
        case AttackMethod.SINGLE:
            return single_attack_report(keys)
        case AttackMethod.GREEDY:
            return greedy_attack(keys, lam)
        case AttackMethod.SEGE_EXACT:
            return sege_exact_original(keys, lam)
        case AttackMethod.SEGE_HEURISTIC:
            return sege_heuristic_original(keys, lam)
        case AttackMethod.SEGE_RELAXED:
            return sege_exact_relaxed(keys, lam)
        case AttackMethod.OPTIMAL:
            return optimal_attack(keys, lam, limit)
        case AttackMethod.OPTIMAL_RELAXED:
            return optimal_attack_relaxed(keys, lam, limit)
