import random

from zr.keys import KeySet


def random_keyset(rng: random.Random, n_max: int, domain: int, n_min: int = 3) -> KeySet:
    """Between ``n_min`` and ``n_max`` distinct keys drawn from ``range(domain)``."""
    n = rng.randint(n_min, min(n_max, domain))
    return KeySet.of(rng.sample(range(domain), n))


def free_interior(keys: KeySet) -> list[int]:
    return [x for x in range(keys.first + 1, keys.last) if x not in keys]
