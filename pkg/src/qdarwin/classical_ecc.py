"""Repetition code over a binary symmetric channel."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .rng import CHANNEL, MESSAGE, RandomStream, check_seed


@dataclass(frozen=True)
class Codeword:
    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise ValueError("codeword length must be >= 1")
        if any(b not in (0, 1) for b in bits):
            raise ValueError("codeword bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "Codeword":
        return cls(tuple(int(ch) for ch in text))

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(frozen=True)
class ChannelSpec:
    """Binary symmetric channel flipping each bit with probability ``p``."""

    p: float
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 0.5:
            raise ValueError(f"flip probability must lie in [0, 1/2], got {self.p!r}")
        object.__setattr__(self, "p", float(self.p))
        object.__setattr__(self, "seed", check_seed(self.seed))


def encode(bit: int, n: int) -> Codeword:
    if bit not in (0, 1):
        raise ValueError("bit must be 0 or 1")
    if n < 1:
        raise ValueError("repetition length must be >= 1")
    return Codeword((bit,) * n)


def hamming_distance(a: Codeword, b: Codeword) -> int:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(x != y for x, y in zip(a.bits, b.bits))


def _flip_mask(ch: ChannelSpec, trial_index: int, n: int) -> np.ndarray:
    # Position i of trial t always consumes the i-th uniform of stream (seed, CHANNEL, t).
    u = RandomStream(ch.seed, (CHANNEL, trial_index)).generator().random(n)
    return u < ch.p


def transmit(c: Codeword, ch: ChannelSpec, trial_index: int) -> Codeword:
    """Send ``c`` through the channel; reproducible per ``(seed, trial_index)``."""
    flips = _flip_mask(ch, trial_index, len(c))
    return Codeword(tuple(int(b) ^ int(f) for b, f in zip(c.bits, flips)))


def majority_decode(c: Codeword) -> int:
    """Majority vote; an exact tie decodes to 0."""
    ones = sum(c.bits)
    return 1 if 2 * ones > len(c) else 0


def analytic_error_rate(n: int, p: float) -> float:
    """Probability that more than half of ``n`` bits flip.

    Summed in exact rationals from the decimal form of ``p``, so ``n=3,
    p=0.1`` gives exactly ``0.028``.
    """
    q = Fraction(repr(float(p)))
    total = sum(comb(n, k) * q ** k * (1 - q) ** (n - k) for k in range(n // 2 + 1, n + 1))
    return float(total)


def error_rate_experiment(n: int, p: float, trials: int, seed: int = 0) -> tuple[float, float]:
    """Empirical and analytic decoded-bit error rate of the length-``n`` code.

    Trial ``t`` sends a uniformly random message bit drawn from stream
    ``(seed, MESSAGE, t)`` and uses the channel noise of :func:`transmit`
    for the same trial index.
    """
    if n < 1 or n % 2 == 0:
        raise ValueError("ambiguous majority; use odd n")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ch = ChannelSpec(p, seed)
    errors = 0
    for t in range(trials):
        bit = int(RandomStream(seed, (MESSAGE, t)).generator().integers(2))
        received = encode(bit, n)
        received = transmit(received, ch, t)
        errors += majority_decode(received) != bit
    return errors / trials, analytic_error_rate(n, p)
