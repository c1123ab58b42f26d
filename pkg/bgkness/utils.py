"""Small shared helpers."""
from __future__ import annotations

import hashlib
from collections.abc import Sequence
from pathlib import Path
from time import perf_counter

import numpy as np


def trailing_ratio(residuals: Sequence[float], window: int = 10) -> float:
    """Geometric mean of successive residual quotients over the last `window` steps."""
    res = np.asarray(residuals, dtype=float)
    res = res[res > 0]
    if len(res) < 2:
        return float("nan")

    tail = res[-(window + 1) :]
    return float((tail[-1] / tail[0]) ** (1.0 / (len(tail) - 1)))


def sha256sum(path: str | Path, chunk_size: int = 1 << 16) -> str:
    """Hex digest of a file, read in chunks."""
    digest = hashlib.sha256()
    with open(path, "rb") as fp:
        for chunk in iter(lambda: fp.read(chunk_size), b""):
            digest.update(chunk)
    return digest.hexdigest()


class Timer:
    def __enter__(self):
        self.start = perf_counter()
        return self

    def __exit__(self, type, value, traceback):
        self.end = perf_counter()
        self.elapsed = self.end - self.start
