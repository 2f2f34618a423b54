"""Seedable random streams and uniform random permutations.

All randomness in the package flows through :class:`RngStream`, a value
object naming one reproducible stream. The generator family is fixed:
PCG64 keyed by ``SeedSequence(seed, spawn_key=(stream_id,))``, so the same
(seed, stream_id) pair reproduces the same draws on every platform, and
distinct stream ids give statistically independent streams. The simulators
assign one stream per run, which makes results independent of how runs are
scheduled across workers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngStream:
    """One named, reproducible stream of randomness."""

    seed: int
    stream_id: int = 0

    def __post_init__(self):
        if self.seed < 0 or self.stream_id < 0:
            raise ValueError("seed and stream_id must be non-negative")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        key = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.Generator(np.random.PCG64(key))


def random_permutation(n: int, rng: RngStream) -> np.ndarray:
    """Uniform random visiting order of the sites ``0..n-1``.

    Returns an int64 array; drawing twice from the same stream yields the
    same permutation.
    """
    if n < 1:
        raise ValueError("permutation length must be at least 1")
    return rng.generator().permutation(n).astype(np.int64, copy=False)
