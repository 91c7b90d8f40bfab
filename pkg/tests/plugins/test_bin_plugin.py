import numpy as np
import pytest

from zr.errors import MalformedFile
from zr.plugins.bin_plugin import KEY_DTYPE, BinPlugin


def test_bin_layout(tmp_path):
    plugin = BinPlugin()
    out = tmp_path / "keys.bin"
    plugin.write_keys(out, np.array([3, 5, 2**64 - 1], dtype=np.uint64))

    raw = out.read_bytes()
    assert len(raw) == 4 * KEY_DTYPE.itemsize
    assert int.from_bytes(raw[:8], "little") == 3
    assert int.from_bytes(raw[-8:], "little") == 2**64 - 1
    assert plugin.read_keys(out).tolist() == [3, 5, 2**64 - 1]


def test_bin_empty_file(tmp_path):
    path = tmp_path / "empty.bin"
    path.write_bytes(b"")
    with pytest.raises(MalformedFile):
        BinPlugin().read_keys(path)


def test_bin_count_mismatch(tmp_path):
    path = tmp_path / "short.bin"
    path.write_bytes((5).to_bytes(8, "little") + (1).to_bytes(8, "little"))
    with pytest.raises(MalformedFile):
        BinPlugin().read_keys(path)


def test_bin_unsorted(tmp_path):
    path = tmp_path / "unsorted.bin"
    body = b"".join(k.to_bytes(8, "little") for k in (2, 9, 4))
    path.write_bytes((3).to_bytes(8, "little") + body)
    with pytest.raises(MalformedFile):
        BinPlugin().read_keys(path)


def test_bin_duplicates_are_kept(tmp_path):
    path = tmp_path / "dups.bin"
    BinPlugin().write_keys(path, np.array([1, 1, 2], dtype=np.uint64))
    assert BinPlugin().read_keys(path).tolist() == [1, 1, 2]
