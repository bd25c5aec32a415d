"""Named, seeded random streams."""

import hashlib
import zlib
from typing import Iterable

import numpy as np

MOBILITY = "mobility"
TRAFFIC = "traffic"
JITTER = "jitter"


class RngStream:
    """
    A numpy Generator bound to ``(seed, label, substream)``.

    Each subsystem draws from its own stream so extra draws in one never shift
    another. Every value drawn is folded into a sha256 digest, which lets two
    runs prove they consumed identical randomness.
    """

    def __init__(self, seed: int, label: str, substream: int = 0):
        if seed < 0:
            raise ValueError(f"seed must be non-negative, got {seed}")
        self.seed = seed
        self.label = label
        self.substream = substream
        entropy = [seed, zlib.crc32(label.encode("utf-8")), substream]
        bit_generator = np.random.PCG64(np.random.SeedSequence(entropy))
        self._gen = np.random.Generator(bit_generator)
        self._digest = hashlib.sha256()
        self.draws = 0

    def _record(self, values: Iterable[float]) -> None:
        arr = np.asarray(list(values), dtype=np.float64)
        self._digest.update(arr.tobytes())
        self.draws += arr.size

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        value = float(self._gen.uniform(low, high))
        self._record([value])
        return value

    def integers(self, low: int, high: int) -> int:
        """Integer in ``[low, high)``."""
        value = int(self._gen.integers(low, high))
        self._record([value])
        return value

    def digest(self) -> str:
        return self._digest.hexdigest()


def combined_digest(streams: Iterable[RngStream]) -> str:
    """Digest over several streams' digests, in the given order."""
    h = hashlib.sha256()
    for stream in streams:
        h.update(stream.digest().encode("ascii"))
    return h.hexdigest()
