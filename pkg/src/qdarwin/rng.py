"""Keyed, counter-based random streams.

Every random draw in the package comes from a :class:`RandomStream` whose
key names the draw's role (e.g. ``(seed, SCATTERING, round)``). Streams are
built from ``SeedSequence`` spawn keys feeding a Philox generator, so a draw
depends only on its key and never on evaluation order or thread scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Stream tags. Stable integers: changing one changes every golden value.
SCATTERING = 1
FRAGMENTS = 2
CHANNEL = 3
MESSAGE = 4

MAX_SEED = 2 ** 64 - 1


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


@dataclass(frozen=True)
class RandomStream:
    seed: int
    key: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "seed", check_seed(self.seed))
        object.__setattr__(self, "key", tuple(int(k) for k in self.key))

    def spawn(self, *key: int) -> "RandomStream":
        """Child stream with ``key`` appended."""
        return RandomStream(self.seed, self.key + tuple(key))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        return np.random.Generator(np.random.Philox(ss))
