from pathlib import Path

import numpy as np

from zr.errors import MalformedFile
from zr.keys import MAX_KEY
from zr.plugins.registry import register


class TxtPlugin:
    format = "txt"

    def read_keys(self, path: Path) -> np.ndarray:
        """Reads one decimal key per line; blank lines are skipped and the
        keys are returned sorted.
        """
        values: list[int] = []
        for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            text = line.strip()
            if not text:
                continue
            try:
                value = int(text)
            except ValueError:
                raise MalformedFile(f"{path}:{lineno}: not an integer: {text!r}")
            if not 0 <= value <= MAX_KEY:
                raise MalformedFile(f"{path}:{lineno}: {value} is not an unsigned 64-bit key")
            values.append(value)
        return np.sort(np.array(values, dtype=np.uint64))

    def write_keys(self, path: Path, keys: np.ndarray) -> None:
        path.write_text("".join(f"{int(k)}\n" for k in keys), encoding="utf-8")


register(TxtPlugin())
