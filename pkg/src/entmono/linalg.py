"""Tensor-structure operations: partial trace/transpose, Schmidt data, norms.

All index arithmetic follows the big-endian convention documented in
:mod:`entmono.states`: reshaping a state vector to ``dims`` gives one axis
per subsystem in order, and reshaping a density matrix to ``dims + dims``
gives row axes 0..k-1 followed by column axes k..2k-1.
"""

from __future__ import annotations

from math import prod

import numpy as np

from .numeric import get_policy
from .states import Bipartition, DensityMatrix, PureState, SchmidtSpectrum


def _check_indices(indices, n: int, what: str) -> tuple[int, ...]:
    out = tuple(sorted(int(i) for i in indices))
    if len(set(out)) != len(out):
        raise ValueError(f"{what} contains duplicate indices: {indices!r}")
    if not out:
        raise ValueError(f"{what} must be nonempty")
    if out[0] < 0 or out[-1] >= n:
        raise ValueError(f"{what} {out} out of range for {n} subsystems")
    return out


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Reduced state on the ``keep`` subsystems (ascending index order).

    Parameters
    ----------
    rho : DensityMatrix
    keep : iterable of int
        Subsystem indices to retain; the rest are traced out.

    Returns
    -------
    DensityMatrix
        State with ``dims = [rho.dims[i] for i in sorted(keep)]``; the
        trace is preserved.
    """
    k = rho.n_subsystems
    keep = _check_indices(keep, k, "keep")
    if len(keep) == k:
        return rho
    traced = [i for i in range(k) if i not in keep]
    d_keep = prod(rho.dims[i] for i in keep)
    d_traced = prod(rho.dims[i] for i in traced)
    tensor = rho.matrix.reshape(rho.dims + rho.dims)
    # group axes as (kept rows, traced rows, kept cols, traced cols), then
    # contract the traced row/col pair in one step
    perm = [*keep, *traced, *(i + k for i in keep), *(i + k for i in traced)]
    grouped = tensor.transpose(perm).reshape(d_keep, d_traced, d_keep, d_traced)
    reduced = np.trace(grouped, axis1=1, axis2=3)
    new_dims = tuple(rho.dims[i] for i in keep)
    return DensityMatrix(reduced, new_dims)


def partial_transpose(rho, transpose_set, dims=None) -> np.ndarray:
    """Transpose the given subsystems only; returns a plain matrix.

    The result is Hermitian and trace-1 whenever the input is, but it is
    generally not positive semidefinite, which is exactly what negativity
    measures; hence the return type is a bare array, not a DensityMatrix.
    ``rho`` may also be a plain square matrix if ``dims`` is given (the
    operation is an involution, so feeding its own output back in is
    legitimate even though that output is usually not a valid state).
    """
    if isinstance(rho, DensityMatrix):
        mat, sub_dims = rho.matrix, rho.dims
    else:
        if dims is None:
            raise ValueError("dims are required when the input is a bare matrix")
        sub_dims = tuple(int(d) for d in dims)
        mat = np.asarray(rho, dtype=np.complex128)
        d = prod(sub_dims)
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {sub_dims}")
    k = len(sub_dims)
    ts = _check_indices(transpose_set, k, "transpose_set")
    tensor = mat.reshape(sub_dims + sub_dims)
    axes = list(range(2 * k))
    for i in ts:
        axes[i], axes[i + k] = axes[i + k], axes[i]
    d = mat.shape[0]
    return tensor.transpose(axes).reshape(d, d)


def trace_norm(m: np.ndarray) -> float:
    """Trace norm (sum of singular values) of a square matrix.

    Hermitian inputs (within the structural tolerance) use the cheaper
    and more accurate sum of absolute eigenvalues.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"trace_norm needs a square matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) <= get_policy().structural_tol:
        herm = 0.5 * (m + m.conj().T)
        return float(np.abs(np.linalg.eigvalsh(herm)).sum())
    return float(np.linalg.svd(m, compute_uv=False).sum())


def axis_permutation_indices(dims, order) -> np.ndarray:
    """Flat index map realizing a subsystem reorder on state vectors.

    ``vec[axis_permutation_indices(dims, order)]`` equals
    ``vec.reshape(dims).transpose(order).ravel()``.
    """
    dims = tuple(int(d) for d in dims)
    order = tuple(int(i) for i in order)
    if sorted(order) != list(range(len(dims))):
        raise ValueError(f"order {order} is not a permutation of 0..{len(dims) - 1}")
    return np.arange(prod(dims)).reshape(dims).transpose(order).ravel()


def permute_subsystems(state, order):
    """Reorder subsystems of a PureState or DensityMatrix.

    ``order[j]`` names the old subsystem that becomes new subsystem j.
    """
    if isinstance(state, PureState):
        idx = axis_permutation_indices(state.dims, order)
        new_dims = tuple(state.dims[i] for i in order)
        return PureState(state.amplitudes[idx], new_dims)
    if isinstance(state, DensityMatrix):
        idx = axis_permutation_indices(state.dims, order)
        new_dims = tuple(state.dims[i] for i in order)
        return DensityMatrix(state.matrix[np.ix_(idx, idx)], new_dims)
    raise ValueError(f"cannot permute object of type {type(state).__name__}")


def schmidt_coefficients(psi: PureState, cut: Bipartition) -> SchmidtSpectrum:
    """Squared Schmidt values of ``psi`` across ``cut``, descending.

    These are the eigenvalues of either reduced state; they are computed
    as squared singular values of the amplitude matrix reshaped along the
    cut, which is more accurate than an eigensolve of the marginal.
    """
    if cut.n_subsystems != psi.n_subsystems:
        raise ValueError(
            f"cut over {cut.n_subsystems} subsystems does not match state with {psi.n_subsystems}"
        )
    order = cut.side_a + cut.side_b
    d_a = prod(psi.dims[i] for i in cut.side_a)
    d_b = prod(psi.dims[i] for i in cut.side_b)
    mat = psi.amplitudes.reshape(psi.dims).transpose(order).reshape(d_a, d_b)
    sv = np.linalg.svd(mat, compute_uv=False)
    coeffs = np.sort(sv * sv)[::-1]
    return SchmidtSpectrum(coeffs)


def apply_local_unitary(state, u: np.ndarray, site: int):
    """Apply a unitary to one subsystem of a PureState or DensityMatrix."""
    u = np.asarray(u, dtype=np.complex128)
    dims = state.dims
    site = int(site)
    if not 0 <= site < len(dims):
        raise ValueError(f"site {site} out of range")
    d = dims[site]
    if u.shape != (d, d):
        raise ValueError(f"unitary shape {u.shape} does not match subsystem dimension {d}")
    if isinstance(state, PureState):
        tensor = state.amplitudes.reshape(dims)
        tensor = np.moveaxis(np.tensordot(u, tensor, axes=([1], [site])), 0, site)
        return PureState(tensor.ravel(), dims)
    if isinstance(state, DensityMatrix):
        full = np.eye(1, dtype=np.complex128)
        for i, di in enumerate(dims):
            full = np.kron(full, u if i == site else np.eye(di))
        return DensityMatrix(full @ state.matrix @ full.conj().T, dims)
    raise ValueError(f"cannot apply unitary to object of type {type(state).__name__}")
