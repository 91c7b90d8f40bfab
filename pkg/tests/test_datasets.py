from pathlib import Path

import numpy as np
import pytest

from zr.datasets import (
    MAX_RANGE,
    Distribution,
    SliceSpec,
    SynthSpec,
    generate,
    load_slice,
    read_keys,
    read_keyset,
    rng_for,
    write_keys,
)
from zr.errors import FileTooSmall, InputError
from zr.keys import KeySet
from zr.plugins.bin_plugin import BinPlugin


@pytest.mark.parametrize("distribution", list(Distribution))
def test_generate_scales_to_the_range(distribution: Distribution) -> None:
    keys = generate(SynthSpec(distribution, seed=7, R=1000, n_target=50))
    assert keys.first == 0
    assert keys.last == 1000
    assert 2 <= keys.n <= 50


def test_generate_is_deterministic() -> None:
    spec = SynthSpec(Distribution.NORMAL, seed=3, R=10**6, n_target=200)
    assert generate(spec) == generate(spec)
    assert generate(spec) != generate(SynthSpec(Distribution.NORMAL, seed=4, R=10**6, n_target=200))


def test_rng_is_seeded() -> None:
    assert np.array_equal(rng_for(11).random(5), rng_for(11).random(5))


def test_tiny_range_collapses_duplicates() -> None:
    keys = generate(SynthSpec(Distribution.UNIFORM, seed=0, R=1, n_target=100))
    assert keys == KeySet((0, 1))


def test_synth_spec_validation() -> None:
    with pytest.raises(InputError):
        SynthSpec(Distribution.UNIFORM, 0, 0, 10)
    with pytest.raises(InputError):
        SynthSpec(Distribution.UNIFORM, 0, MAX_RANGE + 1, 10)
    with pytest.raises(InputError):
        SynthSpec(Distribution.UNIFORM, 0, 100, 1)
    with pytest.raises(InputError):
        SliceSpec(Path("keys.bin"), 1, 0)

    assert SynthSpec(Distribution.EXPONENTIAL, 0, 1000, 50).label == "exponential:n=50:R=1000"
    assert SliceSpec(Path("data/books_200M_uint64"), 100, 0).label == "books_200M_uint64:n=100"


@pytest.mark.parametrize("fmt", ["bin", "txt"])
def test_write_then_read(tmp_path: Path, seven_keys: KeySet, fmt: str) -> None:
    path = tmp_path / f"keys.{fmt}"
    write_keys(path, seven_keys, fmt)
    assert read_keyset(path, fmt) == seven_keys
    assert read_keys(path, fmt).dtype == np.uint64


def test_large_keys_survive_the_bin_format(tmp_path: Path) -> None:
    keys = KeySet((0, 2**63, 2**64 - 1))
    path = tmp_path / "big.bin"
    write_keys(path, keys)
    assert read_keyset(path) == keys


def test_slice_takes_consecutive_distinct_keys(tmp_path: Path) -> None:
    path = tmp_path / "dups.bin"
    BinPlugin().write_keys(path, np.repeat(np.arange(100, dtype=np.uint64), 2))

    for seed in range(10):
        keys = load_slice(SliceSpec(path, 5, seed))
        assert 2 <= keys.n <= 5
        assert keys.keys == tuple(range(keys.first, keys.first + keys.n))


def test_slice_is_deterministic(tmp_path: Path) -> None:
    path = tmp_path / "keys.bin"
    BinPlugin().write_keys(path, np.arange(0, 3000, 3, dtype=np.uint64))
    spec = SliceSpec(path, 50, 9)
    keys = load_slice(spec)
    assert keys == load_slice(spec)
    assert keys.n == 50
    assert keys.last - keys.first == 3 * 49


def test_slice_of_a_short_file(tmp_path: Path) -> None:
    path = tmp_path / "short.bin"
    BinPlugin().write_keys(path, np.arange(3, dtype=np.uint64))
    with pytest.raises(FileTooSmall):
        load_slice(SliceSpec(path, 10, 0))


@pytest.mark.parametrize("values", [[], [7], [7, 7, 7]])
def test_read_keyset_needs_two_distinct_keys(tmp_path: Path, values: list[int]) -> None:
    path = tmp_path / "tiny.bin"
    BinPlugin().write_keys(path, np.array(values, dtype=np.uint64))
    assert read_keys(path).tolist() == values
    with pytest.raises(FileTooSmall):
        read_keyset(path)
