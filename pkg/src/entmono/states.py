"""State representations and factories for multiqubit (and qudit) systems.

Subsystem ordering is big-endian and fixed: subsystem 0 is the most
significant digit of the computational-basis index.  For three qubits the
basis state |q0 q1 q2> sits at flat index 4*q0 + 2*q1 + q2, so |110> is
index 6 and the amplitude tensor is ``amplitudes.reshape(2, 2, 2)`` with
axis k addressing qubit k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .numeric import NumericPolicy, get_policy


def _as_dims(dims) -> tuple[int, ...]:
    out = tuple(int(d) for d in dims)
    if not out or any(d < 1 for d in out):
        raise ValueError(f"subsystem dimensions must be positive integers, got {dims!r}")
    return out


@dataclass(frozen=True)
class PureState:
    """Unit-norm complex amplitude vector over an ordered list of subsystems."""

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        policy = get_policy()
        dims = _as_dims(self.dims)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != prod(dims):
            raise ValueError(
                f"amplitude vector has length {amps.size}, expected {prod(dims)} for dims {dims}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > policy.norm_tol:
            raise ValueError(f"state norm {norm!r} deviates from 1 beyond {policy.norm_tol}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive-semidefinite, trace-1 matrix with subsystem dims."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        policy = get_policy()
        dims = _as_dims(self.dims)
        mat = np.array(self.matrix, dtype=np.complex128)
        d = prod(dims)
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        herm_dev = float(np.max(np.abs(mat - mat.conj().T))) if d else 0.0
        if herm_dev > policy.structural_tol:
            raise ValueError(f"matrix is not Hermitian (max deviation {herm_dev:.3e})")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > policy.structural_tol:
            raise ValueError(f"trace {tr!r} deviates from 1 beyond {policy.structural_tol}")
        min_eig = float(np.linalg.eigvalsh(mat)[0])
        if min_eig < -policy.structural_tol:
            raise ValueError(f"matrix has negative eigenvalue {min_eig:.3e}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_subsystems(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class Bipartition:
    """Ordered split of subsystem indices into a nonempty side A and side B."""

    side_a: tuple[int, ...]
    side_b: tuple[int, ...]

    def __post_init__(self):
        a = tuple(sorted(int(i) for i in self.side_a))
        b = tuple(sorted(int(i) for i in self.side_b))
        if not a or not b:
            raise ValueError("both sides of a bipartition must be nonempty")
        k = len(a) + len(b)
        if set(a) & set(b):
            raise ValueError(f"bipartition sides overlap: {a} | {b}")
        if set(a) | set(b) != set(range(k)):
            raise ValueError(f"bipartition {a} | {b} does not cover 0..{k - 1}")
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    @classmethod
    def of(cls, side_a, n_subsystems: int) -> "Bipartition":
        """Build a bipartition of ``n_subsystems`` from side A alone."""
        a = set(int(i) for i in side_a)
        if not a <= set(range(n_subsystems)):
            raise ValueError(f"side A {sorted(a)} out of range for {n_subsystems} subsystems")
        b = tuple(i for i in range(n_subsystems) if i not in a)
        return cls(tuple(sorted(a)), b)

    @property
    def n_subsystems(self) -> int:
        return len(self.side_a) + len(self.side_b)

    def swapped(self) -> "Bipartition":
        return Bipartition(self.side_b, self.side_a)


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Schmidt coefficients (squared Schmidt values), descending, summing to 1."""

    coefficients: np.ndarray = field()

    def __post_init__(self):
        policy = get_policy()
        coeffs = np.array(self.coefficients, dtype=np.float64).reshape(-1)
        if coeffs.size == 0:
            raise ValueError("Schmidt spectrum cannot be empty")
        if np.any(coeffs < -policy.structural_tol):
            raise ValueError("Schmidt coefficients must be nonnegative")
        if np.any(np.diff(coeffs) > policy.structural_tol):
            raise ValueError("Schmidt coefficients must be sorted descending")
        total = float(coeffs.sum())
        if abs(total - 1.0) > policy.structural_tol:
            raise ValueError(f"Schmidt coefficients sum to {total!r}, expected 1")
        coeffs = np.clip(coeffs, 0.0, None)
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)


# ---------------------------------------------------------------------------
# factories


def basis_state(dims, index: int) -> PureState:
    """Computational-basis state at the given flat index."""
    dims = _as_dims(dims)
    d = prod(dims)
    if not 0 <= index < d:
        raise ValueError(f"basis index {index} out of range for dimension {d}")
    amps = np.zeros(d, dtype=np.complex128)
    amps[index] = 1.0
    return PureState(amps, dims)


def tensor_product(a: PureState, b: PureState) -> PureState:
    """Composite state a (x) b; dims are concatenated."""
    return PureState(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims)


def to_density(psi: PureState) -> DensityMatrix:
    """Rank-1 density matrix |psi><psi|."""
    return DensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()), psi.dims)


def bell_state() -> PureState:
    """The two-qubit state (|00> + |11>)/sqrt(2)."""
    amps = np.zeros(4, dtype=np.complex128)
    amps[0] = amps[3] = 1.0 / np.sqrt(2.0)
    return PureState(amps, (2, 2))


def ghz_state(n: int) -> PureState:
    """(|0...0> + |1...1>)/sqrt(2) on ``n`` qubits, n >= 2."""
    n = int(n)
    if n < 2:
        raise ValueError("ghz_state needs at least 2 qubits")
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return PureState(amps, (2,) * n)


def w_state(n: int) -> PureState:
    """Equal superposition of the n weight-1 basis states, n >= 2."""
    n = int(n)
    if n < 2:
        raise ValueError("w_state needs at least 2 qubits")
    amps = np.zeros(2**n, dtype=np.complex128)
    for k in range(n):
        amps[1 << k] = 1.0 / np.sqrt(n)
    return PureState(amps, (2,) * n)


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pure_state(dims, seed) -> PureState:
    """Haar-random pure state: normalized i.i.d. complex Gaussian vector.

    ``seed`` may be an integer (deterministic per seed) or an existing
    :class:`numpy.random.Generator` to draw from a shared stream.
    """
    dims = _as_dims(dims)
    rng = _as_rng(seed)
    d = prod(dims)
    vec = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(vec / np.linalg.norm(vec), dims)


def random_mixed_state(dims, rank: int, seed) -> DensityMatrix:
    """Induced-measure mixed state: marginal of a Haar purification.

    The purification lives on the system plus a ``rank``-dimensional
    ancilla, so the output has numerical rank ``rank`` almost surely.
    """
    dims = _as_dims(dims)
    rank = int(rank)
    d = prod(dims)
    if not 1 <= rank <= d:
        raise ValueError(f"rank must lie in [1, {d}], got {rank}")
    rng = _as_rng(seed)
    block = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    block /= np.linalg.norm(block)
    mat = block @ block.conj().T
    mat = 0.5 * (mat + mat.conj().T)
    mat /= np.trace(mat).real
    return DensityMatrix(mat, dims)


def random_unitary(d: int, seed) -> np.ndarray:
    """Haar-random d x d unitary (QR of a complex Gaussian, phases fixed)."""
    d = int(d)
    if d < 1:
        raise ValueError("dimension must be positive")
    rng = _as_rng(seed)
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return q * phases


def default_policy() -> NumericPolicy:
    """Convenience accessor for the active numeric policy."""
    return get_policy()
