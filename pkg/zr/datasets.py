"""Synthetic key sets and slices of real sorted-key files.

Randomness comes from numpy's counter-based Philox generator seeded with the
caller's seed, so samples are identical across platforms.
"""

import logging
from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path

import numpy as np

from zr.errors import DegenerateSample, FileTooSmall, InputError
from zr.keys import KeySet
from zr.plugins import registry

logger = logging.getLogger(__name__)

# float64 represents every integer up to here
MAX_RANGE = 2**53


class Distribution(StrEnum):
    UNIFORM = "uniform"
    NORMAL = "normal"
    EXPONENTIAL = "exponential"


@dataclass(slots=True, frozen=True)
class SynthSpec:
    distribution: Distribution
    seed: int
    R: int
    n_target: int

    def __post_init__(self) -> None:
        if not 1 <= self.R <= MAX_RANGE:
            raise InputError(f"range R must lie in [1, 2^53], got {self.R}")
        if self.n_target < 2:
            raise InputError(f"n_target must be at least 2, got {self.n_target}")

    @property
    def label(self) -> str:
        return f"{self.distribution}:n={self.n_target}:R={self.R}"


@dataclass(slots=True, frozen=True)
class SliceSpec:
    path: Path
    n: int
    seed: int
    format: str = "bin"

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InputError(f"slice length must be at least 2, got {self.n}")

    @property
    def label(self) -> str:
        return f"{self.path.stem}:n={self.n}"


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _draw(rng: np.random.Generator, distribution: Distribution, size: int) -> np.ndarray:
    match distribution:
        case Distribution.UNIFORM:
            return rng.random(size)
        case Distribution.NORMAL:
            return rng.standard_normal(size)
        case Distribution.EXPONENTIAL:
            return rng.standard_exponential(size)


def generate(spec: SynthSpec) -> KeySet:
    """Sample, min-max scale to ``[0, R]``, round and deduplicate.

    Args:
        spec: Distribution, seed, range and requested sample size.
    Returns:
        At most ``n_target`` distinct keys; the extremes are 0 and ``R``.
    Raises:
        DegenerateSample: If fewer than two distinct keys survive.
    """
    sample = _draw(rng_for(spec.seed), Distribution(spec.distribution), spec.n_target)
    lo, hi = sample.min(), sample.max()
    if hi == lo:
        raise DegenerateSample("all sampled values are equal")

    scaled = (sample - lo) / (hi - lo) * spec.R
    # half away from zero; everything is non-negative here
    rounded = np.unique(np.floor(scaled + 0.5).astype(np.int64))
    if len(rounded) < 2:
        raise DegenerateSample(f"only {len(rounded)} distinct key survived rounding")
    if len(rounded) < spec.n_target:
        logger.debug("%s: %d duplicates removed", spec.label, spec.n_target - len(rounded))
    return KeySet(tuple(int(k) for k in rounded))


def read_keys(path: Path, format_name: str = "bin") -> np.ndarray:
    return registry.get(format_name).read_keys(path)


def write_keys(path: Path, keys: KeySet, format_name: str = "bin") -> None:
    registry.get(format_name).write_keys(path, np.array(keys.keys, dtype=np.uint64))


def read_keyset(path: Path, format_name: str = "bin") -> KeySet:
    """Load a whole key file as a key set (duplicates dropped).

    Raises:
        FileTooSmall: If the file holds fewer than two distinct keys.
    """
    unique = np.unique(read_keys(path, format_name))
    if len(unique) < 2:
        raise FileTooSmall(f"{path} holds {len(unique)} distinct keys, at least two are required")
    return KeySet.of(int(k) for k in unique)


def load_slice(spec: SliceSpec) -> KeySet:
    """Take ``n`` consecutive distinct keys from a random start in a sorted key file.

    Duplicates inside the window are skipped and the window extends forward
    until ``n`` distinct keys are collected or the file ends.

    Raises:
        FileTooSmall: If the file holds fewer than ``n`` keys, or fewer than
            two distinct keys follow the start.
        MalformedFile: If the file does not follow its format.
    """
    keys = read_keys(spec.path, spec.format)
    if len(keys) < spec.n:
        raise FileTooSmall(f"{spec.path} holds {len(keys)} keys, {spec.n} requested")

    start = int(rng_for(spec.seed).integers(0, len(keys) - spec.n + 1))
    picked: list[int] = []
    for value in keys[start:]:
        key = int(value)
        if not picked or key != picked[-1]:
            picked.append(key)
            if len(picked) == spec.n:
                break

    if len(picked) < 2:
        raise FileTooSmall(f"{spec.path} has fewer than two distinct keys after position {start}")
    if len(picked) < spec.n:
        logger.info("%s: only %d distinct keys after position %d", spec.path, len(picked), start)
    return KeySet(tuple(picked))
