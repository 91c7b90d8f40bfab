from pathlib import Path

import numpy as np

from zr.errors import MalformedFile
from zr.plugins.registry import register

KEY_DTYPE = np.dtype("<u8")


class BinPlugin:
    """SOSD layout: an 8-byte little-endian key count, then the keys."""

    format = "bin"

    def read_keys(self, path: Path) -> np.ndarray:
        size = path.stat().st_size
        if size < KEY_DTYPE.itemsize:
            raise MalformedFile(f"{path}: missing count header")

        count = int(np.fromfile(path, dtype=KEY_DTYPE, count=1)[0])
        expected = KEY_DTYPE.itemsize * (count + 1)
        if size != expected:
            raise MalformedFile(f"{path}: header announces {count} keys but the file holds {size} bytes")

        keys = np.fromfile(path, dtype=KEY_DTYPE, offset=KEY_DTYPE.itemsize)
        if np.any(keys[1:] < keys[:-1]):
            raise MalformedFile(f"{path}: keys are not sorted")
        return keys.astype(np.uint64)

    def write_keys(self, path: Path, keys: np.ndarray) -> None:
        data = np.asarray(keys, dtype=KEY_DTYPE)
        with path.open("wb") as fh:
            np.array([len(data)], dtype=KEY_DTYPE).tofile(fh)
            data.tofile(fh)


register(BinPlugin())
