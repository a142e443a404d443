"""Numerical minimization of ensemble-averaged pure-state measures.

Every K-member pure-state decomposition of a rank-r mixed state arises
from its eigendecomposition through a K x r matrix with orthonormal
columns, so the search runs over that isometry manifold: sweeps of
two-row unitary rotations (angle plus relative phase, each optimized by
a bracketed golden-section line search), accepting only improvements,
with re-orthonormalization every sweep.  The result is always an upper
bound on the true convex roof.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from . import _kernels
from .linalg import axis_permutation_indices
from .measures import concurrence_pure, concurrence_two_qubit, negativity
from .numeric import get_policy
from .states import Bipartition, DensityMatrix, PureState, to_density

ROOF_MEASURES = ("concurrence", "negativity")

_STALL_SWEEPS = 50
_ANGLE_TOL = 1e-4


@dataclass(frozen=True)
class RoofConfig:
    """Search budget for :func:`convex_roof`.

    ``ensemble_size`` of None resolves to min(2*rank, rank + 2) per
    state.  ``max_iterations`` counts rotation sweeps per restart;
    ``tolerance`` is the relative objective decrease below which a sweep
    counts as stalled (50 consecutive stalled sweeps terminate a
    restart).
    """

    ensemble_size: int | None = None
    restarts: int = 20
    max_iterations: int = 2000
    tolerance: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.ensemble_size is not None and int(self.ensemble_size) < 1:
            raise ValueError("ensemble_size must be positive")
        if int(self.restarts) < 1:
            raise ValueError("restarts must be at least 1")
        if int(self.max_iterations) < 1:
            raise ValueError("max_iterations must be at least 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class Ensemble:
    """Probability-weighted pure states realizing a density matrix."""

    members: tuple[tuple[float, PureState], ...]
    realized_state: DensityMatrix

    def __post_init__(self):
        policy = get_policy()
        if not self.members:
            raise ValueError("ensemble needs at least one member")
        probs = np.array([p for p, _ in self.members], dtype=np.float64)
        if np.any(probs < -policy.structural_tol):
            raise ValueError("ensemble probabilities must be nonnegative")
        if abs(float(probs.sum()) - 1.0) > policy.structural_tol:
            raise ValueError(f"ensemble probabilities sum to {probs.sum()!r}, expected 1")
        recon = np.zeros_like(self.realized_state.matrix)
        for p, psi in self.members:
            if psi.dims != self.realized_state.dims:
                raise ValueError("ensemble member dims do not match the realized state")
            recon = recon + p * np.outer(psi.amplitudes, psi.amplitudes.conj())
        dev = float(np.max(np.abs(recon - self.realized_state.matrix)))
        if dev > policy.reconstruction_tol:
            raise ValueError(f"ensemble does not reconstruct its state (max dev {dev:.3e})")


@dataclass(frozen=True)
class RoofResult:
    """Outcome of one convex-roof search (an upper bound on the roof)."""

    value: float
    best_ensemble: Ensemble
    converged: bool
    objective_history: tuple[float, ...]
    restart_histories: tuple[tuple[float, ...], ...]


def _nonzero_eigenpairs(rho: DensityMatrix):
    w, vecs = np.linalg.eigh(rho.matrix)
    order = np.argsort(w, kind="stable")[::-1]
    w = w[order]
    vecs = vecs[:, order]
    mask = w > get_policy().rank_tol
    return w[mask], vecs[:, mask]


def decompositions_from_isometry(rho: DensityMatrix, v: np.ndarray) -> Ensemble:
    """Ensemble generated from the eigen-decomposition by an isometry.

    Member j is the (unnormalized) combination sum_i v[j, i] *
    sqrt(mu_i) |e_i> over the nonzero eigenpairs of ``rho``; its squared
    norm is the member probability.  Columns of ``v`` must be
    orthonormal and there must be exactly one column per nonzero
    eigenvalue.  Members with vanishing probability are dropped; they
    contribute nothing to the mixture.
    """
    policy = get_policy()
    mu, vecs = _nonzero_eigenpairs(rho)
    rank = mu.size
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 2 or v.shape[1] != rank or v.shape[0] < rank:
        raise ValueError(
            f"isometry shape {v.shape} incompatible with state rank {rank}"
        )
    gram_dev = float(np.max(np.abs(v.conj().T @ v - np.eye(rank))))
    if gram_dev > policy.structural_tol:
        raise ValueError(f"columns are not orthonormal (max deviation {gram_dev:.3e})")
    basis = np.sqrt(mu)[:, None] * vecs.T
    raw = v @ basis
    members = []
    for j in range(raw.shape[0]):
        p = float(np.vdot(raw[j], raw[j]).real)
        if p <= 1e-14:
            continue
        members.append((p, PureState(raw[j] / np.sqrt(p), rho.dims)))
    return Ensemble(tuple(members), rho)


def _pure_measure_fn(measure: str):
    if measure == "concurrence":
        return concurrence_pure
    if measure == "negativity":
        return negativity
    raise ValueError(f"convex_roof supports measures {ROOF_MEASURES}, got {measure!r}")


def ensemble_objective(ensemble: Ensemble, cut: Bipartition, measure: str) -> float:
    """Average pure-state measure of an ensemble across a cut."""
    fn = _pure_measure_fn(measure)
    return float(sum(p * fn(psi, cut).value for p, psi in ensemble.members))


def _random_isometry(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r).copy()
    phases /= np.abs(phases)
    return np.ascontiguousarray(q * phases)


def convex_roof(
    rho,
    cut: Bipartition,
    measure: str,
    cfg: RoofConfig | None = None,
    _use_phase: bool = True,
) -> RoofResult:
    """Upper bound on min over decompositions of the average pure measure.

    ``measure`` is 'concurrence' or 'negativity' (on cuts with a
    dimension-2 side the two pure-state objectives coincide, so either
    name reaches the same optimum there).  ``_use_phase=False`` restricts
    rotations to real angles and exists only for regression testing; the
    default complex search is required for correctness on some states.
    """
    fn = _pure_measure_fn(measure)
    if isinstance(rho, PureState):
        rho = to_density(rho)
    if not isinstance(rho, DensityMatrix):
        raise ValueError("convex_roof needs a DensityMatrix (or PureState)")
    if cut.n_subsystems != rho.n_subsystems:
        raise ValueError("cut does not match the state's subsystem count")
    cfg = cfg if cfg is not None else RoofConfig()

    mu, vecs = _nonzero_eigenpairs(rho)
    rank = mu.size
    if rank == 1:
        psi = PureState(vecs[:, 0], rho.dims)
        value = fn(psi, cut).value
        ens = Ensemble(((1.0, psi),), rho)
        return RoofResult(value, ens, True, (value,), ((value,),))

    size = int(cfg.ensemble_size) if cfg.ensemble_size is not None else min(2 * rank, rank + 2)
    if size < rank:
        raise ValueError(f"ensemble_size {size} is below the state rank {rank}")

    order = cut.side_a + cut.side_b
    d_a = prod(rho.dims[i] for i in cut.side_a)
    d_b = prod(rho.dims[i] for i in cut.side_b)
    perm = axis_permutation_indices(rho.dims, order)
    basis = np.ascontiguousarray((np.sqrt(mu)[:, None] * vecs.T)[:, perm])
    code = 0 if measure == "concurrence" else 1

    children = np.random.SeedSequence(cfg.seed).spawn(cfg.restarts)
    best_value = np.inf
    best_ensemble = None
    best_converged = False
    best_index = 0
    histories: list[tuple[float, ...]] = []
    for i in range(cfg.restarts):
        if i == 0:
            v = np.zeros((size, rank), dtype=np.complex128)
            v[:rank, :rank] = np.eye(rank)
        else:
            v = _random_isometry(size, rank, np.random.default_rng(children[i]))
        members = np.ascontiguousarray(v @ basis)
        history = np.empty(cfg.max_iterations + 1, dtype=np.float64)
        n_rec, converged, _obj = _kernels.run_restart(
            members,
            v,
            basis,
            d_a,
            d_b,
            code,
            int(cfg.max_iterations),
            float(cfg.tolerance),
            _STALL_SWEEPS,
            _ANGLE_TOL,
            bool(_use_phase),
            history,
        )
        histories.append(tuple(float(x) for x in history[:n_rec]))
        ensemble = decompositions_from_isometry(rho, v)
        value = ensemble_objective(ensemble, cut, measure)
        if value < best_value:
            best_value = value
            best_ensemble = ensemble
            best_converged = bool(converged)
            best_index = i
    return RoofResult(
        value=float(best_value),
        best_ensemble=best_ensemble,
        converged=best_converged,
        objective_history=histories[best_index],
        restart_histories=tuple(histories),
    )


def roof_certificate_gap(
    rho: DensityMatrix, cut: Bipartition | None = None, cfg: RoofConfig | None = None
) -> float:
    """Optimizer value minus the analytic two-qubit concurrence.

    The regression metric for the optimizer: small and nonnegative (up
    to roundoff) when the search works.
    """
    if not isinstance(rho, DensityMatrix) or rho.dims != (2, 2):
        raise ValueError("roof_certificate_gap is defined for two-qubit states")
    cut = cut if cut is not None else Bipartition.of((0,), 2)
    found = convex_roof(rho, cut, "concurrence", cfg).value
    return found - concurrence_two_qubit(rho).value
