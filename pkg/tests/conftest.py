from pathlib import Path

import pytest

from zr.keys import KeySet

SEVEN_KEYS = (2, 11, 13, 19, 32, 36, 39)
SYMMETRIC_KEYS = tuple(k for k in [*range(0, 17), *range(48, 65)] if k not in {1, 8, 56, 63})


@pytest.fixture
def tmp_file(tmp_path: Path) -> Path:
    return tmp_path / "keys.tmp"


@pytest.fixture
def seven_keys() -> KeySet:
    """Seven keys whose best single poison is 12."""
    return KeySet(SEVEN_KEYS)


@pytest.fixture
def symmetric_keys() -> KeySet:
    """Symmetric instance on which Seg+E misses the optimal two-poison attack."""
    return KeySet(SYMMETRIC_KEYS)


@pytest.fixture
def seven_keys_txt(tmp_path: Path) -> Path:
    path = tmp_path / "seven.txt"
    path.write_text("\n".join(str(k) for k in SEVEN_KEYS) + "\n")
    return path
