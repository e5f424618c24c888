"""System-environment models that imprint records of the system on the environment.

The global state is always pure: a system qubit (subsystem 0) and ``n_env``
environment qubits (subsystems 1..N), each starting in ``|0>``. Branching
writes a record of the system's pointer state on every environment qubit;
scattering rounds then couple random disjoint pairs of environment qubits
to each other, leaving the system untouched.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .hilbert import (DensityOperator, QuantumState, SubsystemLayout, apply_unitary,
                      reduced_from_pure)
from .rng import SCATTERING, RandomStream, check_seed

SYSTEM_INITS = ("plus", "zero")

# "flip" is cos(a/2) I + i sin(a/2) X⊗X; "swap" is cos(a/2) I + i sin(a/2) SWAP.
SCATTERING_KINDS = ("flip", "swap")

NO_PAIRS_WARNING = "scattering skipped: fewer than two environment qubits"

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_SWAP = np.eye(4, dtype=np.complex128)[[0, 2, 1, 3]]


def _check_angle(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= np.pi:
        raise ValueError(f"{name} must lie in [0, pi], got {value!r}")
    return value


@dataclass(frozen=True)
class ModelConfig:
    """Parameters of one branching-plus-scattering run.

    ``system_init`` is ``"plus"``, ``"zero"`` or a length-2 amplitude sequence
    (which must already be normalized).
    """

    n_env: int
    copy_angle: float = np.pi
    system_init: str | tuple[complex, complex] = "plus"
    scattering_rounds: int = 0
    scattering_angle: float = 0.0
    seed: int = 0
    scattering_kind: str = "flip"

    def __post_init__(self) -> None:
        if int(self.n_env) != self.n_env or self.n_env < 1:
            raise ValueError(f"n_env must be a positive integer, got {self.n_env!r}")
        if int(self.scattering_rounds) != self.scattering_rounds or self.scattering_rounds < 0:
            raise ValueError(f"scattering_rounds must be a non-negative integer, got {self.scattering_rounds!r}")
        object.__setattr__(self, "n_env", int(self.n_env))
        object.__setattr__(self, "scattering_rounds", int(self.scattering_rounds))
        object.__setattr__(self, "copy_angle", _check_angle("copy_angle", self.copy_angle))
        object.__setattr__(self, "scattering_angle",
                           _check_angle("scattering_angle", self.scattering_angle))
        object.__setattr__(self, "seed", check_seed(self.seed))
        if self.scattering_kind not in SCATTERING_KINDS:
            raise ValueError(f"scattering_kind must be one of {SCATTERING_KINDS}")
        init = self.system_init
        if isinstance(init, str):
            if init not in SYSTEM_INITS:
                raise ValueError(f"system_init must be one of {SYSTEM_INITS} or two amplitudes")
        else:
            amps = tuple(complex(a) for a in init)
            if len(amps) != 2:
                raise ValueError("custom system_init needs exactly two amplitudes")
            if abs(sum(abs(a) ** 2 for a in amps) - 1.0) > 1e-10:
                raise ValueError("custom system_init amplitudes are not normalized")
            object.__setattr__(self, "system_init", amps)

    def system_amplitudes(self) -> np.ndarray:
        if self.system_init == "plus":
            return np.array([1.0, 1.0], dtype=np.complex128) / np.sqrt(2.0)
        if self.system_init == "zero":
            return np.array([1.0, 0.0], dtype=np.complex128)
        return np.array(self.system_init, dtype=np.complex128)


@dataclass(frozen=True)
class GlobalState:
    """Pure joint state of system and environment, with the config that produced it."""

    state: QuantumState
    config: ModelConfig
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.state.dims != (2,) * (self.config.n_env + 1):
            raise ValueError("global state must hold one system qubit and n_env environment qubits")

    @property
    def n_env(self) -> int:
        return self.config.n_env


def branching_unitary(theta: float) -> np.ndarray:
    """Controlled rotation on (system, environment qubit).

    The environment qubit is rotated by ``theta`` about Y when the system is
    in ``|1>`` and left alone otherwise. ``theta = pi`` writes a perfect
    record (CNOT up to a sign on ``|11>``).
    """
    theta = _check_angle("theta", theta)
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    u = np.eye(4, dtype=np.complex128)
    u[2:, 2:] = [[c, -s], [s, c]]
    return u


def scattering_unitary(alpha: float, kind: str = "flip") -> np.ndarray:
    """Two-qubit environment coupling ``cos(a/2) I + i sin(a/2) G``.

    ``G`` is ``X⊗X`` for ``kind="flip"`` and SWAP for ``kind="swap"``. Both
    give ``i|01>`` from ``|10>`` at ``alpha = pi``, but only the flip coupling
    can change a state that is symmetric under exchanging the pair, and
    every branching state is.
    """
    alpha = _check_angle("scattering_angle", alpha)
    if kind == "flip":
        gen = np.kron(_PAULI_X, _PAULI_X)
    elif kind == "swap":
        gen = _SWAP
    else:
        raise ValueError(f"unknown scattering kind {kind!r}")
    return np.cos(alpha / 2.0) * np.eye(4, dtype=np.complex128) + 1j * np.sin(alpha / 2.0) * gen


def initial_state(config: ModelConfig) -> QuantumState:
    """System state ⊗ ``|0>`` on every environment qubit."""
    layout = SubsystemLayout.qubits(config.n_env + 1)
    amps = np.zeros(layout.total_dim, dtype=np.complex128)
    # Environment all-zero: only the system digit (most significant) varies.
    sys_amps = config.system_amplitudes()
    amps[0] = sys_amps[0]
    amps[layout.strides[0]] = sys_amps[1]
    return QuantumState(layout, amps)


def evolve_branching(config: ModelConfig) -> GlobalState:
    """Couple the system to environment qubits 1..N in turn."""
    psi = initial_state(config)
    u = branching_unitary(config.copy_angle)
    for k in range(1, config.n_env + 1):
        psi = apply_unitary(psi, u, (0, k))
    return GlobalState(psi, config)


def random_pairs(n_env: int, stream: RandomStream) -> list[tuple[int, int]]:
    """``n_env // 2`` disjoint random pairs of environment indices."""
    order = stream.generator().permutation(n_env) + 1
    return [tuple(sorted((int(order[2 * i]), int(order[2 * i + 1]))))
            for i in range(n_env // 2)]


def scattering_step(gs: GlobalState, stream: RandomStream,
                    pairs: Sequence[tuple[int, int]] | None = None) -> GlobalState:
    """One round of pairwise scattering inside the environment.

    Pairs are drawn from ``stream`` unless given explicitly. With fewer than
    two environment qubits the state is returned unchanged and a warning is
    added to its provenance.
    """
    cfg = gs.config
    if cfg.n_env < 2:
        warnings = gs.warnings if NO_PAIRS_WARNING in gs.warnings else gs.warnings + (NO_PAIRS_WARNING,)
        return GlobalState(gs.state, cfg, warnings)
    if pairs is None:
        pairs = random_pairs(cfg.n_env, stream)
    u = scattering_unitary(cfg.scattering_angle, cfg.scattering_kind)
    psi = gs.state
    for a, b in pairs:
        if not (1 <= a <= cfg.n_env and 1 <= b <= cfg.n_env):
            raise ValueError("scattering never acts on the system qubit")
        psi = apply_unitary(psi, u, (a, b))
    return GlobalState(psi, cfg, gs.warnings)


def run_model(config: ModelConfig) -> GlobalState:
    """Branching followed by ``scattering_rounds`` rounds keyed by ``(seed, round)``."""
    gs = evolve_branching(config)
    root = RandomStream(config.seed, (SCATTERING,))
    for r in range(config.scattering_rounds):
        gs = scattering_step(gs, root.spawn(r))
    return gs


def system_state(gs: GlobalState | QuantumState) -> DensityOperator:
    psi = gs.state if isinstance(gs, GlobalState) else gs
    return reduced_from_pure(psi, (0,))


def pointer_coherence(rho_s: DensityOperator) -> float:
    """Magnitude of the system's off-diagonal element in the pointer basis."""
    if rho_s.matrix.shape != (2, 2):
        raise ValueError(f"pointer coherence needs a 2x2 system state, got {rho_s.matrix.shape}")
    return float(abs(rho_s.matrix[0, 1]))
