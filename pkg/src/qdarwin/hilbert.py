"""Dense multipartite pure states and density operators.

Index convention: subsystem 0 is the system, subsystems 1..N are the
environment. Amplitude vectors follow ``np.kron`` ordering, so subsystem 0
is the most significant digit of the basis index and ``|0>|1>`` sits at
index 1 of a two-qubit vector. Reshaping an amplitude vector with
``reshape(dims)`` puts subsystem ``k`` on axis ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import NumericalConsistencyError

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
UNITARY_TOL = 1e-10
SCHMIDT_CUTOFF = 1e-10


@dataclass(frozen=True)
class SubsystemLayout:
    """Ordered subsystem dimensions; index 0 is the system."""

    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("layout needs at least one subsystem")
        if any(d < 2 for d in dims):
            raise ValueError(f"every subsystem dimension must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)

    @classmethod
    def qubits(cls, n: int) -> "SubsystemLayout":
        return cls((2,) * n)

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    @property
    def strides(self) -> tuple[int, ...]:
        """Basis-index stride of each subsystem."""
        out = []
        acc = 1
        for d in reversed(self.dims):
            out.append(acc)
            acc *= d
        return tuple(reversed(out))

    def check_indices(self, indices: Iterable[int]) -> tuple[int, ...]:
        """Return ``indices`` sorted and deduplicated, or raise on a bad index."""
        idx = sorted(set(int(i) for i in indices))
        for i in idx:
            if not 0 <= i < self.n_subsystems:
                raise ValueError(f"invalid subsystem index {i} for {self.n_subsystems} subsystems")
        return tuple(idx)

    def __add__(self, other: "SubsystemLayout") -> "SubsystemLayout":
        return SubsystemLayout(self.dims + other.dims)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Normalized pure state over a :class:`SubsystemLayout`."""

    layout: SubsystemLayout
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.shape[0] != self.layout.total_dim:
            raise ValueError(
                f"amplitude vector has length {amps.shape[0]}, layout needs {self.layout.total_dim}"
            )
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (|psi|^2 = {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes, dims: Sequence[int] | None = None,
                        normalize: bool = False) -> "QuantumState":
        """Build a state from raw amplitudes, defaulting to a qubit layout."""
        amps = np.asarray(amplitudes, dtype=np.complex128).ravel()
        if dims is None:
            n = int(round(np.log2(amps.shape[0])))
            if 2 ** n != amps.shape[0]:
                raise ValueError("cannot infer a qubit layout; pass dims explicitly")
            dims = (2,) * n
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(SubsystemLayout(tuple(dims)), amps)

    @classmethod
    def basis(cls, digits: Sequence[int], dims: Sequence[int] | None = None) -> "QuantumState":
        """Computational basis state ``|d_0 d_1 ...>``."""
        layout = SubsystemLayout(tuple(dims) if dims is not None else (2,) * len(digits))
        if len(digits) != layout.n_subsystems:
            raise ValueError("one digit per subsystem required")
        index = sum(int(d) * s for d, s in zip(digits, layout.strides))
        amps = np.zeros(layout.total_dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(layout, amps)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.layout.dims

    def tensor(self) -> np.ndarray:
        """Amplitudes as an array with one axis per subsystem."""
        return self.amplitudes.reshape(self.layout.dims)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuantumState):
            return NotImplemented
        return self.layout == other.layout and np.array_equal(self.amplitudes, other.amplitudes)

    def __hash__(self) -> int:
        return hash((self.layout, self.amplitudes.tobytes()))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace operator acting on subsystems with ``dims``.

    Hermiticity and trace are checked on construction; positivity is checked
    lazily by :meth:`eigenvalues` because it needs a diagonalization.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        mat = _frozen(self.matrix)
        dim = int(np.prod(dims)) if dims else 1
        if mat.shape != (dim, dim):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        if np.max(np.abs(mat - mat.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise ValueError("density operator is not Hermitian")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density operator trace is {tr!r}, expected 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues, with round-off negatives clamped to zero.

        Raises:
            NumericalConsistencyError: an eigenvalue is below ``-PSD_TOL``.
        """
        evals = np.linalg.eigvalsh(self.matrix)
        if evals.size and evals[0] < -PSD_TOL:
            raise NumericalConsistencyError(
                f"not positive semidefinite (smallest eigenvalue {evals[0]:.3e})"
            )
        return np.clip(evals, 0.0, None)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensityOperator):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.matrix, other.matrix)

    __hash__ = None  # type: ignore[assignment]


def _hermitize(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


def tensor_product(a: QuantumState, b: QuantumState) -> QuantumState:
    """Joint state ``a ⊗ b``; ``b``'s subsystems are appended after ``a``'s."""
    amps = np.kron(a.amplitudes, b.amplitudes)
    amps = amps / np.linalg.norm(amps)
    return QuantumState(a.layout + b.layout, amps)


def pure_to_density(psi: QuantumState) -> DensityOperator:
    amps = psi.amplitudes
    return DensityOperator(psi.dims, np.outer(amps, amps.conj()))


def partial_trace(rho: DensityOperator, layout: SubsystemLayout,
                  keep: Iterable[int]) -> DensityOperator:
    """Trace out every subsystem of ``layout`` not listed in ``keep``.

    The kept subsystems appear in ascending index order in the result.
    """
    keep = layout.check_indices(keep)
    if rho.dims != layout.dims:
        raise ValueError(f"operator dims {rho.dims} do not match layout {layout.dims}")
    n = layout.n_subsystems
    drop = tuple(i for i in range(n) if i not in keep)
    dk = int(np.prod([layout.dims[i] for i in keep])) if keep else 1
    dd = int(np.prod([layout.dims[i] for i in drop])) if drop else 1
    t = rho.matrix.reshape(layout.dims + layout.dims)
    perm = keep + drop
    t = t.transpose(perm + tuple(n + p for p in perm)).reshape(dk, dd, dk, dd)
    reduced = np.trace(t, axis1=1, axis2=3)
    return DensityOperator(tuple(layout.dims[i] for i in keep), _hermitize(reduced))


def _bipartition_matrix(psi: QuantumState, left: tuple[int, ...]) -> np.ndarray:
    """Amplitudes reshaped to a (left, rest) matrix."""
    dims = psi.dims
    rest = tuple(i for i in range(len(dims)) if i not in left)
    dl = int(np.prod([dims[i] for i in left])) if left else 1
    return psi.tensor().transpose(left + rest).reshape(dl, -1)


def reduced_from_pure(psi: QuantumState, keep: Iterable[int]) -> DensityOperator:
    """Reduced state on ``keep`` without forming the global density matrix."""
    keep = psi.layout.check_indices(keep)
    m = _bipartition_matrix(psi, keep)
    reduced = _hermitize(m @ m.conj().T)
    return DensityOperator(tuple(psi.dims[i] for i in keep), reduced)


def reduced_spectrum(psi: QuantumState, keep: Iterable[int]) -> np.ndarray:
    """Eigenvalues of the reduced state on ``keep``.

    A pure global state has identical nonzero spectra on both sides of any
    cut, so the smaller side is diagonalized; the result has length
    ``min(d_keep, d_rest)``.
    """
    keep = psi.layout.check_indices(keep)
    rest = tuple(i for i in range(psi.layout.n_subsystems) if i not in keep)
    dk = int(np.prod([psi.dims[i] for i in keep])) if keep else 1
    dr = psi.layout.total_dim // dk
    side = keep if dk <= dr else rest
    m = _bipartition_matrix(psi, side)
    if not m.imag.any():
        m = np.ascontiguousarray(m.real)  # real path: faster matmul and eigensolver
    gram = m @ m.conj().T
    gram = 0.5 * (gram + gram.conj().T)
    evals = np.linalg.eigvalsh(gram)
    if evals.size and evals[0] < -PSD_TOL:
        raise NumericalConsistencyError(
            f"not positive semidefinite (smallest eigenvalue {evals[0]:.3e})"
        )
    return np.clip(evals, 0.0, None)


def schmidt_coefficients(psi: QuantumState, left: Iterable[int]) -> np.ndarray:
    """Singular values of the (left | rest) bipartition, sorted descending."""
    left = psi.layout.check_indices(left)
    if not left or len(left) == psi.layout.n_subsystems:
        raise ValueError("trivial bipartition")
    values = np.linalg.svd(_bipartition_matrix(psi, left), compute_uv=False)
    return np.sort(values)[::-1]


def is_entangled(psi: QuantumState, left: Iterable[int]) -> bool:
    """True when the state is not a product across the (left | rest) cut."""
    return int(np.sum(schmidt_coefficients(psi, left) > SCHMIDT_CUTOFF)) > 1


def check_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> None:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"operator must be square, got shape {u.shape}")
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > tol:
        raise ValueError(f"unitarity violated (max deviation {dev:.3e})")


def apply_unitary(psi: QuantumState, u: np.ndarray, targets: Sequence[int]) -> QuantumState:
    """Apply ``u`` to the ordered ``targets``; the first target is most significant in ``u``."""
    u = np.asarray(u, dtype=np.complex128)
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise ValueError("target subsystems must be distinct")
    psi.layout.check_indices(targets)
    dt = int(np.prod([psi.dims[t] for t in targets]))
    if u.shape != (dt, dt):
        raise ValueError(f"operator shape {u.shape} does not match target dimension {dt}")
    check_unitary(u)
    front = tuple(range(len(targets)))
    t = np.moveaxis(psi.tensor(), targets, front)
    shape = t.shape
    t = (u @ t.reshape(dt, -1)).reshape(shape)
    amps = np.moveaxis(t, front, targets).reshape(-1)
    return QuantumState(psi.layout, amps)


@dataclass(frozen=True)
class Fragment:
    """Sorted set of environment subsystem indices, each in ``1..n_env``.

    The complement within the environment is computed on demand.
    """

    indices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        idx = tuple(int(i) for i in self.indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"fragment indices must be strictly increasing, got {idx}")
        if idx and idx[0] < 1:
            raise ValueError("invalid subsystem index: fragments never contain the system (0)")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, indices: Iterable[int], n_env: int | None = None) -> "Fragment":
        frag = cls(tuple(sorted(set(int(i) for i in indices))))
        if n_env is not None:
            frag.check(n_env)
        return frag

    def check(self, n_env: int) -> None:
        if self.indices and self.indices[-1] > n_env:
            raise ValueError(f"invalid subsystem index {self.indices[-1]} for N={n_env}")

    def complement(self, n_env: int) -> "Fragment":
        self.check(n_env)
        own = set(self.indices)
        return Fragment(tuple(i for i in range(1, n_env + 1) if i not in own))

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)
