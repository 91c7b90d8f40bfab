from pathlib import Path
from typing import Protocol

import numpy as np


class KeyFilePlugin(Protocol):
    format: str  # "bin", "txt", ...

    def read_keys(self, path: Path) -> np.ndarray: ...
    def write_keys(self, path: Path, keys: np.ndarray) -> None: ...
