"""Entropy, system-fragment mutual information and redundancy.

All entropies are von Neumann entropies in bits.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .dynamics import GlobalState
from .hilbert import DensityOperator, Fragment, QuantumState, reduced_spectrum
from .rng import FRAGMENTS, RandomStream

EIGENVALUE_FLOOR = 1e-12
ENTROPY_ZERO = 1e-14
DEFAULT_POLICY_THRESHOLD = 1000
DEFAULT_MC_SAMPLES = 200
DEFAULT_DELTA = 0.1


def spectrum_entropy(evals: np.ndarray) -> float:
    """Shannon entropy (bits) of an eigenvalue list, ignoring values <= 1e-12."""
    p = np.asarray(evals, dtype=float)
    p = p[p > EIGENVALUE_FLOOR]
    h = float(-np.sum(p * np.log2(p)))
    # an eigenvalue of 1 - eps leaves ~1e-16 of round-off
    return h if h > ENTROPY_ZERO else 0.0


def von_neumann_entropy(rho: DensityOperator) -> float:
    """``-Tr rho log2 rho``.

    Raises:
        NumericalConsistencyError: ``rho`` has an eigenvalue below ``-1e-9``.
    """
    return spectrum_entropy(rho.eigenvalues())


def _state_of(gs: GlobalState | QuantumState) -> QuantumState:
    return gs.state if isinstance(gs, GlobalState) else gs


def subsystem_entropy(psi: QuantumState, keep: Iterable[int]) -> float:
    """Entropy of the reduced state on ``keep`` of a pure global state."""
    return spectrum_entropy(reduced_spectrum(psi, keep))


@dataclass(frozen=True)
class MIPoint:
    fragment: Fragment
    h_s: float
    h_f: float
    h_sf: float
    mi: float


def mutual_information(gs: GlobalState | QuantumState, fragment: Fragment | Iterable[int],
                       h_s: float | None = None) -> MIPoint:
    """``I(S:F) = H_S + H_F - H_SF`` for one environment fragment.

    ``h_s`` may be passed in when the caller already knows it; it does not
    depend on the fragment.
    """
    psi = _state_of(gs)
    n_env = psi.layout.n_subsystems - 1
    if not isinstance(fragment, Fragment):
        fragment = Fragment.of(fragment)
    fragment.check(n_env)
    if h_s is None:
        h_s = subsystem_entropy(psi, (0,))
    if not fragment.indices:
        return MIPoint(fragment, h_s, 0.0, h_s, 0.0)
    h_f = subsystem_entropy(psi, fragment.indices)
    h_sf = subsystem_entropy(psi, (0,) + fragment.indices)
    return MIPoint(fragment, h_s, h_f, h_sf, h_s + h_f - h_sf)


def fragments_of_size(n_env: int, m: int, policy: str = "exhaustive",
                      samples: int = DEFAULT_MC_SAMPLES,
                      stream: RandomStream | None = None) -> list[Fragment]:
    """Fragments of ``m`` environment qubits.

    ``policy="exhaustive"`` lists all subsets in lexicographic order.
    ``policy="monte_carlo"`` draws ``samples`` subsets uniformly with
    replacement; draw ``i`` uses the stream keyed ``(FRAGMENTS, m, i)``.
    """
    if not 0 <= m <= n_env:
        raise ValueError(f"fragment size {m} outside [0, {n_env}]")
    if policy == "exhaustive":
        return [Fragment(c) for c in combinations(range(1, n_env + 1), m)]
    if policy != "monte_carlo":
        raise ValueError(f"unknown fragment policy {policy!r}")
    if samples < 1:
        raise ValueError("monte_carlo needs at least one sample")
    if stream is None:
        raise ValueError("monte_carlo sampling needs a random stream")
    base = stream.spawn(FRAGMENTS, m)
    out = []
    for i in range(samples):
        pick = base.spawn(i).generator().choice(n_env, size=m, replace=False)
        out.append(Fragment(tuple(sorted(int(j) + 1 for j in pick))))
    return out


@dataclass(frozen=True)
class CurvePoint:
    m: int
    f: float
    mean_mi: float
    std_mi: float
    n_fragments: int
    exhaustive: bool


@dataclass(frozen=True)
class MICurve:
    """Mean mutual information per fragment size ``m = 0..N``."""

    n_env: int
    h_s: float
    points: tuple[CurvePoint, ...]

    @property
    def mean_mi(self) -> np.ndarray:
        return np.array([p.mean_mi for p in self.points])


def mi_curve(gs: GlobalState | QuantumState,
             policy_threshold: int = DEFAULT_POLICY_THRESHOLD,
             samples: int = DEFAULT_MC_SAMPLES,
             stream: RandomStream | None = None,
             workers: int = 1) -> MICurve:
    """Sweep fragment sizes, averaging ``I(S:F)`` over same-size fragments.

    A size is enumerated exhaustively when ``C(N, m) <= policy_threshold``
    and sampled otherwise. The stream defaults to the run's seed. Results do
    not depend on ``workers``: fragments are drawn up front, evaluated
    independently and reduced in draw order.
    """
    psi = _state_of(gs)
    n_env = psi.layout.n_subsystems - 1
    if stream is None:
        stream = RandomStream(gs.config.seed if isinstance(gs, GlobalState) else 0)
    h_s = subsystem_entropy(psi, (0,))

    plan = []
    for m in range(n_env + 1):
        exhaustive = math.comb(n_env, m) <= policy_threshold
        frags = fragments_of_size(n_env, m, "exhaustive" if exhaustive else "monte_carlo",
                                  samples, stream)
        plan.append((m, exhaustive, frags))

    unique = sorted({f.indices for _, _, frags in plan for f in frags})

    def evaluate(indices: tuple[int, ...]) -> float:
        return mutual_information(psi, Fragment(indices), h_s=h_s).mi

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(evaluate, unique))
    else:
        values = [evaluate(u) for u in unique]
    mi_of = dict(zip(unique, values))

    points = []
    for m, exhaustive, frags in plan:
        mis = np.array([mi_of[f.indices] for f in frags])
        points.append(CurvePoint(m=m, f=m / n_env, mean_mi=float(np.mean(mis)),
                                 std_mi=float(np.std(mis)), n_fragments=len(frags),
                                 exhaustive=exhaustive))
    return MICurve(n_env=n_env, h_s=h_s, points=tuple(points))


@dataclass(frozen=True)
class RedundancyResult:
    delta: float
    h_s: float
    m_star: int | None = None
    f_delta: float | None = None
    r_delta: float | None = None
    achieved: bool = False
    degenerate: bool = False


def redundancy(curve: MICurve, delta: float = DEFAULT_DELTA) -> RedundancyResult:
    """Smallest fragment size carrying ``(1 - delta) H_S``, and ``R = N / m*``.

    A system with ``H_S = 0`` has nothing to record; it is reported as
    achieved at ``m* = 1`` and flagged ``degenerate``.
    """
    delta = float(delta)
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    n = curve.n_env
    if curve.h_s <= EIGENVALUE_FLOOR:
        return RedundancyResult(delta, curve.h_s, 1, 1 / n, float(n), True, degenerate=True)
    target = (1.0 - delta) * curve.h_s
    for p in curve.points:
        if p.m >= 1 and p.mean_mi >= target:
            return RedundancyResult(delta, curve.h_s, p.m, p.m / n, n / p.m, True)
    return RedundancyResult(delta, curve.h_s)
